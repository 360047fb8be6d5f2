"""Command-line interface.

Exit codes: 0 success, 1 validation found errors, 2 unreadable input,
3 invalid parameters, 4 internal invariant violation. Worker threads are
set with the ECTKIT_NUM_THREADS environment variable.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import align as _align
from ._parallel import worker_count
from .complex import ComplexError, EmbeddedComplex, euler_characteristic, validate
from .directions import (
    Direction,
    DirectionSet,
    fibonacci_sphere,
    parse_angle,
    read_directions_csv,
    uniform_circle,
)
from .export import atomic_write, heatmap_pgm, matrix_csv, sidecar
from .filtration import ecc
from .ingest import (
    ParseError,
    field_from_grayscale_image,
    load_complex,
    read_pgm,
    read_simplex_list,
    write_simplex_list,
)
from .transforms import GLOBAL, MODES, detect, ect, lect, level_values, sect, select
from .walkthrough import InvariantError

EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_PARAMS = 3
EXIT_INVARIANT = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARAMS)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


@dataclass
class RunConfig:
    command: str
    inputs: list[Path]
    scheme: str = "circle"
    num_directions: int = 64
    directions_file: Path | None = None
    num_thresholds: int = 64
    mode: str = GLOBAL
    out: Path | None = None
    format: str = "csv"
    binarize: int = 1
    align: str = "none"

    def check(self) -> None:
        if self.num_directions < 1:
            raise UsageError(f"--num-directions must be >= 1, got {self.num_directions}")
        if self.num_thresholds < 2:
            raise UsageError(f"--thresholds must be >= 2, got {self.num_thresholds}")
        if self.mode not in MODES:
            raise UsageError(f"unknown --mode {self.mode!r}")
        if self.scheme == "file" and self.directions_file is None:
            raise UsageError("--scheme file needs --directions-file")
        if self.binarize < 0:
            raise UsageError("--binarize must be nonnegative")
        worker_count()


def _config(args, command: str) -> RunConfig:
    cfg = RunConfig(
        command=command,
        inputs=[Path(p) for p in getattr(args, "inputs", [])],
        scheme=getattr(args, "scheme", "circle"),
        num_directions=getattr(args, "num_directions", 64),
        directions_file=getattr(args, "directions_file", None),
        num_thresholds=getattr(args, "thresholds", 64),
        mode=getattr(args, "mode", GLOBAL),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        binarize=getattr(args, "binarize", 1),
        align=getattr(args, "align", "none"),
    )
    cfg.check()
    return cfg


def _directions(cfg: RunConfig, dim: int) -> DirectionSet:
    if cfg.scheme == "file":
        try:
            dirs = read_directions_csv(Path(cfg.directions_file).read_text())
        except ValueError as exc:
            raise ParseError(f"{cfg.directions_file}: {exc}") from None
    elif cfg.scheme == "sphere":
        dirs = fibonacci_sphere(cfg.num_directions)
    else:
        dirs = uniform_circle(cfg.num_directions)
    if dirs.dim != dim:
        raise UsageError(f"direction scheme gives R^{dirs.dim} directions for an R^{dim} complex")
    return dirs


def _load(path: Path, cfg: RunConfig) -> EmbeddedComplex:
    K = load_complex(path, threshold=cfg.binarize)
    if cfg.align == "center" and not K.is_empty():
        K = _align.center(K)[0]
    elif cfg.align == "pca" and not K.is_empty():
        K = _align.pca_align(K)[0]
    return K


def _radius(R: float) -> float:
    if R > 0:
        return R
    _warn("bounding radius is 0; using R = 1 for the threshold grid")
    return 1.0


def _direction_arg(args, dim: int) -> Direction:
    if args.vector is not None:
        try:
            vec = [float(x) for x in args.vector.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse direction vector {args.vector!r}") from None
        d = Direction.from_vector(vec)
    else:
        d = Direction.from_angle(parse_angle(args.angle))
    if d.dim != dim:
        raise UsageError(f"direction has {d.dim} components, complex lives in R^{dim}")
    return d


def _meta_path(out: Path) -> Path:
    return out.with_name(out.name + ".meta")


def _write_matrix(cfg, row_labels, col_labels, values, corner, meta):
    atomic_write(cfg.out, matrix_csv(row_labels, col_labels, values, corner))
    if cfg.format == "pgm":
        pgm, lo, hi = heatmap_pgm(values)
        atomic_write(cfg.out.with_suffix(".pgm"), pgm)
        meta = {**meta, "heatmap_min": lo, "heatmap_max": hi, "heatmap_maxval": 255}
    atomic_write(_meta_path(cfg.out), sidecar(meta))


# --------------------------------------------------------------------------
# commands


def cmd_ecc(args) -> int:
    cfg = _config(args, "ecc")
    K = _load(cfg.inputs[0], cfg)
    omega = _direction_arg(args, K.dim)
    curve = ecc(K, omega)
    if cfg.out is not None:
        atomic_write(cfg.out, curve.to_csv())
    else:
        sys.stdout.write(curve.to_csv())
    print(f"chi={euler_characteristic(K)}")
    print(f"breakpoints={len(curve)}")
    return 0


def cmd_ect(args) -> int:
    cfg = _config(args, "ect")
    K = _load(cfg.inputs[0], cfg)
    dirs = _directions(cfg, K.dim)
    R = _radius(K.radius) if cfg.mode == GLOBAL else K.radius
    M = ect(K, dirs, cfg.num_thresholds, cfg.mode, radius=R)
    meta = {
        "command": "ect",
        "mode": cfg.mode,
        "T": cfg.num_thresholds,
        "N": len(dirs),
        "scheme": dirs.scheme,
        "R": M.radius,
        "chi": euler_characteristic(K),
    }
    if cfg.mode == GLOBAL:
        rows, corner = M.thresholds, "threshold"
    else:
        rows, corner = range(cfg.num_thresholds), "index"
        meta["ranges"] = ";".join(f"{lo!r} {hi!r}" for lo, hi in M.per_direction_ranges)
    _write_matrix(cfg, rows, dirs.labels(), M.entries, corner, meta)
    return 0


def cmd_sect(args) -> int:
    cfg = _config(args, "sect")
    K = _load(cfg.inputs[0], cfg)
    dirs = _directions(cfg, K.dim)
    S = sect(K, dirs, radius=_radius(K.radius))
    ts, vals = S.matrix(cfg.num_thresholds)
    meta = {
        "command": "sect",
        "T": cfg.num_thresholds,
        "N": len(dirs),
        "scheme": dirs.scheme,
        "R": S.radius,
        "ecc_means": " ".join(repr(c.mean) for c in S.curves),
    }
    _write_matrix(cfg, ts, dirs.labels(), vals, "t", meta)
    return 0


def _parse_heights(spec: str | None, R: float, count: int) -> np.ndarray:
    if spec is None:
        return np.linspace(-R, R, count)
    try:
        if ":" in spec:
            lo, hi, n = spec.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(lo), float(hi), n)
        return np.array([float(x) for x in spec.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse --heights {spec!r}; use LO:HI:COUNT or a comma list") from None


def cmd_detect(args) -> int:
    cfg = _config(args, "detect")
    series = [_load(p, cfg) for p in cfg.inputs]
    dims = {K.dim for K in series}
    if len(dims) != 1:
        raise UsageError("all shapes in a series must share the ambient dimension")
    dirs = _directions(cfg, dims.pop())
    R = _radius(max(K.radius for K in series))
    xs = _parse_heights(args.heights, R, cfg.num_thresholds)
    D = detect(series, dirs, xs, radius=R)
    meta = {
        "command": "detect",
        "N": len(dirs),
        "scheme": dirs.scheme,
        "R": D.radius,
        "normalization": D.normalization,
        "inputs": " ".join(str(p) for p in cfg.inputs),
    }
    _write_matrix(cfg, D.times, [repr(float(x)) for x in xs], D.values, "time", meta)
    return 0


def cmd_lect(args) -> int:
    if args.level is None and not args.enumerate_levels:
        raise UsageError("give --level T or --enumerate-levels")
    path = Path(args.image)
    field = field_from_grayscale_image(read_pgm(path.read_bytes()))
    v = _direction_arg(args, 2)
    h = field.complex.radius if args.height is None else float(args.height)
    fn = select if args.superlevel else lect
    if args.enumerate_levels:
        lines = [f"{float(t)!r},{fn(field, v, h, float(t))}" for t in level_values(field)]
        text = "\n".join(lines) + "\n"
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
    else:
        print(fn(field, v, h, float(args.level)))
    return 0


def cmd_dist(args) -> int:
    cfg = _config(args, "dist")
    A, B = (_load(p, cfg) for p in cfg.inputs)
    if A.dim != B.dim:
        raise UsageError("shapes live in different dimensions")
    dirs = _directions(cfg, A.dim)
    R = _radius(max(A.radius, B.radius))
    if args.metric == "sect":
        d = _align.sect_distance(sect(A, dirs, radius=R), sect(B, dirs, radius=R))
    else:
        MA = ect(A, dirs, cfg.num_thresholds, cfg.mode, radius=R)
        MB = ect(B, dirs, cfg.num_thresholds, cfg.mode, radius=R)
        d = _align.ect_distance(MA, MB, "2" if args.metric == "l2" else "inf")
    print(repr(d))
    return 0


def cmd_align(args) -> int:
    cfg = _config(args, "align")
    K = load_complex(cfg.inputs[0], threshold=cfg.binarize)
    if K.is_empty():
        raise UsageError("cannot align an empty complex")
    aligned, report = (_align.pca_align if args.method == "pca" else _align.center)(K)
    atomic_write(cfg.out, write_simplex_list(aligned))
    atomic_write(_meta_path(cfg.out), sidecar({"command": "align", "method": args.method, **report.to_metadata()}))
    for note in report.notes:
        _warn(note)
    return 0


def cmd_validate(args) -> int:
    path = Path(args.inputs[0])
    suffix = path.suffix.lower()
    if suffix in (".off", ".pgm", ".pnm"):
        K = load_complex(path, threshold=args.binarize)
    else:
        K = read_simplex_list(path.read_text(), close=False)
    problems = validate(K)
    for p in problems:
        print(p)
    if any(p.severity == "error" for p in problems):
        return EXIT_CHECK_FAILED
    print("OK")
    return 0


def cmd_walkthrough(args) -> int:
    from .walkthrough import run

    for k, v in run(args.out_dir).items():
        print(f"{k}={v}")
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _add_directions(p):
    p.add_argument("--scheme", choices=["circle", "sphere", "file"], default="circle")
    p.add_argument("-n", "--num-directions", type=int, default=64)
    p.add_argument("--directions-file", type=Path)


def _add_input_opts(p):
    p.add_argument("--binarize", type=int, default=1, help="PGM pixels >= this value are foreground")
    p.add_argument("--align", choices=["none", "center", "pca"], default="none")


def _add_direction_choice(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--angle", help="radians, e.g. 0.785 or 3/4pi")
    g.add_argument("--vector", help="comma separated components")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ectkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ecc", help="Euler characteristic curve in one direction")
    p.add_argument("inputs", nargs=1, metavar="INPUT")
    _add_direction_choice(p)
    _add_input_opts(p)
    p.add_argument("-o", "--out", type=Path)
    p.set_defaults(func=cmd_ecc)

    p = sub.add_parser("ect", help="ECT matrix")
    p.add_argument("inputs", nargs=1, metavar="INPUT")
    _add_directions(p)
    _add_input_opts(p)
    p.add_argument("-T", "--thresholds", type=int, default=64)
    p.add_argument("--mode", choices=list(MODES), default=GLOBAL)
    p.add_argument("-o", "--out", type=Path, required=True)
    p.add_argument("--format", choices=["csv", "pgm"], default="csv")
    p.set_defaults(func=cmd_ect)

    p = sub.add_parser("sect", help="SECT sampled on a threshold grid")
    p.add_argument("inputs", nargs=1, metavar="INPUT")
    _add_directions(p)
    _add_input_opts(p)
    p.add_argument("-T", "--thresholds", type=int, default=64)
    p.add_argument("-o", "--out", type=Path, required=True)
    p.add_argument("--format", choices=["csv", "pgm"], default="csv")
    p.set_defaults(func=cmd_sect)

    p = sub.add_parser("detect", help="DETECT surface of a shape series")
    p.add_argument("inputs", nargs="+", metavar="INPUT")
    _add_directions(p)
    _add_input_opts(p)
    p.add_argument("--heights", help="LO:HI:COUNT or comma list (default: T points on [-R, R])")
    p.add_argument("-T", "--thresholds", type=int, default=64)
    p.add_argument("-o", "--out", type=Path, required=True)
    p.add_argument("--format", choices=["csv", "pgm"], default="csv")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("lect", help="LECT / SELECT of a greyscale image")
    p.add_argument("image")
    _add_direction_choice(p)
    p.add_argument("--height", type=float, help="h (default R)")
    p.add_argument("--level", type=float)
    p.add_argument("--enumerate-levels", action="store_true")
    p.add_argument("--superlevel", action="store_true", help="SELECT instead of LECT")
    p.add_argument("-o", "--out", type=Path)
    p.set_defaults(func=cmd_lect)

    p = sub.add_parser("dist", help="distance between two shapes' transforms")
    p.add_argument("inputs", nargs=2, metavar="INPUT")
    _add_directions(p)
    _add_input_opts(p)
    p.add_argument("--metric", choices=["l2", "linf", "sect"], default="l2")
    p.add_argument("-T", "--thresholds", type=int, default=64)
    p.add_argument("--mode", choices=list(MODES), default=GLOBAL)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("align", help="center or PCA-align a shape")
    p.add_argument("inputs", nargs=1, metavar="INPUT")
    p.add_argument("--method", choices=["center", "pca"], default="pca")
    p.add_argument("--binarize", type=int, default=1)
    p.add_argument("-o", "--out", type=Path, required=True)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("validate", help="check a complex for structural problems")
    p.add_argument("inputs", nargs=1, metavar="INPUT")
    p.add_argument("--binarize", type=int, default=1)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("walkthrough", help="run the bundled leaflet pipeline")
    p.add_argument("out_dir", nargs="?")
    p.set_defaults(func=cmd_walkthrough)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ComplexError, UnicodeDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
