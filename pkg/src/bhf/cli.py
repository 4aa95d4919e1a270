"""Command line interface.

Exit codes: 0 success / verified, 1 invalid input or failed verification,
2 usage error, 3 inconclusive verdict.  "-" reads stdin or writes stdout;
bimodule arguments accept builtin:tau-mu, builtin:tau-lambda, builtin:H
and builtin:identity.  BHF_SEED overrides --seed.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import cfk, io_formats, ktd, type_d, type_da

BUILTINS = {
    "builtin:tau-mu": type_da.builtin_tau_mu,
    "builtin:tau-lambda": type_da.builtin_tau_lambda,
    "builtin:H": type_da.builtin_H,
    "builtin:identity": type_da.builtin_identity,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_any(path: str):
    """Load a document of any kind; returns (kind, object)."""
    if path in BUILTINS:
        return "type_da", BUILTINS[path]()
    text = _read(path)
    try:
        kind = io_formats.detect_kind(text)
        if kind == "cfk":
            return kind, io_formats.parse_cfk(text)
        if kind == "type_d":
            return kind, io_formats.parse_typed(text)
        if kind == "type_da":
            return kind, io_formats.parse_typeda(text)
        return kind, io_formats.parse_script(text)
    except io_formats.ParseError as e:
        raise CliError(f"{path}: {e}") from None


def _load_cfk(path: str) -> cfk.KnotComplex:
    kind, obj = _load_any(path)
    if kind != "cfk":
        raise CliError(f"{path}: expected a knot complex, found {kind}")
    bad = cfk.validate(obj)
    if bad:
        raise CliError(f"{path}: invalid complex: {bad[0]}")
    return obj


def _load_typed(path: str) -> type_d.TypeDModule:
    kind, obj = _load_any(path)
    if kind != "type_d":
        raise CliError(f"{path}: expected a type D module, found {kind}")
    bad = type_d.validate_d(obj)
    if bad:
        raise CliError(f"{path}: invalid module: {bad[0]}")
    return obj


def _seed(args) -> int | None:
    env = os.environ.get("BHF_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"BHF_SEED must be an integer, got {env!r}") from None
    return getattr(args, "seed", None)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bhf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="validate any document")
    sp.add_argument("path")

    sp = sub.add_parser("flip", help="exchange basepoints of a knot complex")
    sp.add_argument("path")
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("simplify", help="reduce and simplify a knot complex")
    sp.add_argument("path")
    sp.add_argument("--mode", choices=["v", "h", "both"], default="both")
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("tau", help="print tau of a knot complex")
    sp.add_argument("path")

    sp = sub.add_parser("cfd", help="type D module of the complement")
    sp.add_argument("path")
    sp.add_argument("--framing", type=int, default=None)
    sp.add_argument("--algo", choices=["basis", "basefree"], default="basis")
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("tensor", help="box tensor a bimodule with a module")
    sp.add_argument("--bimodule", required=True,
                    help="builtin:{tau-mu,tau-lambda,H,identity} or a file")
    sp.add_argument("path")
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("build-h",
                        help="assemble the involution bimodule from six twists")
    sp.add_argument("--script", default=None,
                    help="replay an explicit cancellation script")
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("reduce", help="cancel idempotent arrows or actions")
    sp.add_argument("path")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--script", default=None)
    sp.add_argument("-o", "--output", default=None)

    sp = sub.add_parser("iso", help="search for a permutation isomorphism")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("verify",
                        help="check invariance under the elliptic involution")
    sp.add_argument("path")
    sp.add_argument("--framing", type=int, default=None)
    sp.add_argument("--algo", choices=["basis", "basefree"], default="basefree")

    sp = sub.add_parser("dot", help="Graphviz rendering of a type D module")
    sp.add_argument("path")
    sp.add_argument("-o", "--output", default=None)
    return p


def _cmd_validate(args) -> int:
    kind, obj = _load_any(args.path)
    if kind == "cfk":
        bad = cfk.validate(obj)
    elif kind == "type_d":
        bad = type_d.validate_d(obj)
    elif kind == "type_da":
        bad = type_da.validate_da(obj)
    else:
        bad = []
    if bad:
        for b in bad:
            print(b, file=sys.stderr)
        return 1
    print(f"valid {kind}")
    return 0


def _cmd_flip(args) -> int:
    C = _load_cfk(args.path)
    _write(args.output, io_formats.write_cfk(cfk.flip(C)))
    return 0


def _cmd_simplify(args) -> int:
    C = cfk.reduce(_load_cfk(args.path))
    if args.mode == "v":
        C = cfk.vertical_simplify(C)
    elif args.mode == "h":
        C = cfk.horizontal_simplify(C)
    else:
        S = cfk.simultaneous_simplify(C)
        if S is None:
            raise CliError("simultaneous simplification did not converge")
        C = S
    _write(args.output, io_formats.write_cfk(C))
    return 0


def _cmd_tau(args) -> int:
    C = cfk.reduce(_load_cfk(args.path))
    print(cfk.tau(C))
    return 0


def _cmd_cfd(args) -> int:
    C = cfk.reduce(_load_cfk(args.path))
    try:
        D = ktd._ktd(C, args.algo, args.framing)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(args.output, io_formats.write_typed(D))
    return 0


def _cmd_tensor(args) -> int:
    kind, B = _load_any(args.bimodule)
    if kind != "type_da":
        raise CliError(f"{args.bimodule}: expected a type DA bimodule")
    M = _load_typed(args.path)
    _write(args.output, io_formats.write_typed(type_da.box_da_d(B, M)))
    return 0


def _cmd_build_h(args) -> int:
    order = None
    if args.script:
        order = io_formats.parse_script(_read(args.script))
    B = type_da.builtin_tau_mu()
    L = type_da.builtin_tau_lambda()
    prod = type_da.box_da_da(B, L)
    for factor in (B, L, B, L):
        prod = type_da.box_da_da(prod, factor)
    try:
        reduced, _trace = type_da.reduce_da(prod, order)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(args.output, io_formats.write_typeda(reduced))
    return 0


def _cmd_reduce(args) -> int:
    kind, obj = _load_any(args.path)
    order = _seed(args)
    if args.script:
        order = io_formats.parse_script(_read(args.script))
    try:
        if kind == "type_d":
            out, _ = type_d.reduce_d(obj, order)
            _write(args.output, io_formats.write_typed(out))
        elif kind == "type_da":
            out, _ = type_da.reduce_da(obj, order)
            _write(args.output, io_formats.write_typeda(out))
        else:
            raise CliError(f"{args.path}: cannot reduce a {kind}")
    except ValueError as e:
        raise CliError(str(e)) from None
    return 0


def _cmd_iso(args) -> int:
    kl, left = _load_any(args.left)
    kr, right = _load_any(args.right)
    if kl != kr:
        raise CliError(f"cannot compare a {kl} with a {kr}")
    if kl == "type_d":
        mapping = type_d.isomorphic_d(left, right)
    elif kl == "type_da":
        mapping = type_da.isomorphic_da(left, right)
    else:
        raise CliError(f"isomorphism search needs modules, not {kl}")
    if mapping is None:
        print("no permutation isomorphism found", file=sys.stderr)
        return 3
    for k in sorted(mapping):
        print(f"{k} -> {mapping[k]}")
    return 0


def _cmd_verify(args) -> int:
    C = _load_cfk(args.path)
    try:
        res = ktd.verify_elliptic_invariance(C, args.algo, args.framing)
    except ValueError as e:
        raise CliError(str(e)) from None
    print(f"{res.verdict}: {res.detail}")
    if res.verdict == "verified":
        return 0
    if res.verdict == "failed":
        return 1
    return 3


def _cmd_dot(args) -> int:
    M = _load_typed(args.path)
    _write(args.output, type_d.to_dot(M))
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "flip": _cmd_flip,
    "simplify": _cmd_simplify,
    "tau": _cmd_tau,
    "cfd": _cmd_cfd,
    "tensor": _cmd_tensor,
    "build-h": _cmd_build_h,
    "reduce": _cmd_reduce,
    "iso": _cmd_iso,
    "verify": _cmd_verify,
    "dot": _cmd_dot,
}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return 1


def entry() -> None:
    sys.exit(main(sys.argv[1:]))
