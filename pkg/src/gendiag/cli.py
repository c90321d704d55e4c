"""Command line entry point: ``gendiag {classify,diag,gen,verify,hasse}``.

Exit codes: 0 success, 2 usage or parse error, 3 dimension mismatch,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .construct import CounterexampleSpec, Field, GeneratorSpec, Kind, epsilon_gram, random_gram
from .errors import DegreeMismatch, GendiagError, MalformedInput
from .matrix import format_matrix, generalized_diagonal, parse_matrix
from .order import Relation, Setting, bruhat_leq, classify
from .perm import (
    Permutation,
    all_permutations,
    format_cycles,
    is_cycle_text,
    max_label,
    parse_cycles,
    parse_one_line,
)
from .verify import (
    MAX_AUDIT_N,
    MAX_POSET_N,
    class_upsets,
    cycle_leq_upsets,
    exhaustive_poset,
    full_theorem_audit,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_FAILED = 4

_RELATION_TEXT = {
    Relation.ALWAYS_EQUAL: "{lhs}sigma{rhs} = {lhs}tau{rhs} always",
    Relation.SIGMA_LEQ_TAU: "{lhs}sigma{rhs} <= {lhs}tau{rhs} always",
    Relation.TAU_LEQ_SIGMA: "{lhs}tau{rhs} <= {lhs}sigma{rhs} always",
    Relation.INCOMPARABLE: "either strict inequality occurs for some matrix",
    Relation.UNDEFINED: "products may be non-real; no order is defined",
}


class UsageError(Exception):
    pass


def _parse_pair(sigma_text: str, tau_text: str, n: Optional[int]) -> tuple[Permutation, Permutation]:
    """Parse two permutations, giving cycle-form arguments a shared degree.

    The degree is ``n`` if given, else the length of a one-line argument,
    else the largest label in either cycle-form argument.
    """
    texts = (sigma_text, tau_text)
    if n is None:
        one_line = [len(t.split()) for t in texts if not is_cycle_text(t)]
        n = one_line[0] if one_line else max(max_label(t) for t in texts)
    return tuple(parse_cycles(t, n) if is_cycle_text(t) else parse_one_line(t) for t in texts)


def _parse_single(text: str, n: int) -> Permutation:
    return parse_cycles(text, n) if is_cycle_text(text) else parse_one_line(text)


def _emit_json(command: str, parameters: dict, results: dict, failures: list) -> None:
    doc = {"command": command, "parameters": parameters, "results": results, "failures": failures}
    print(json.dumps(doc, indent=2, sort_keys=False))


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    sigma, tau = _parse_pair(args.sigma, args.tau, args.n)
    setting = Setting(args.setting)
    verdict = classify(sigma, tau, setting)
    bars = ("|X_", "|") if setting is Setting.COMPLEX_ABS else ("X_", "")
    results = {
        "sigma": format_cycles(sigma),
        "tau": format_cycles(tau),
        "n": sigma.n,
        "verdict": verdict.relation.value,
        "meaning": _RELATION_TEXT[verdict.relation].format(lhs=bars[0], rhs=bars[1]),
        "witness": None,
        "bruhat": {
            "sigma_leq_tau": bruhat_leq(sigma, tau),
            "tau_leq_sigma": bruhat_leq(tau, sigma),
        },
    }
    if verdict.witness is not None:
        lo, hi = verdict.witness
        results["witness"] = {"lower": format_cycles(lo), "upper": format_cycles(hi)}
    if args.json:
        _emit_json("classify", {"setting": setting.value}, results, [])
        return EXIT_OK
    print(f"sigma: {results['sigma']}")
    print(f"tau: {results['tau']}")
    print(f"setting: {setting.value}")
    print(f"verdict: {results['verdict']}")
    print(f"meaning: {results['meaning']}")
    if results["witness"]:
        print(f"witness: {results['witness']['lower']} <=_c {results['witness']['upper']}")
    b = results["bruhat"]
    print(f"bruhat: sigma <= tau: {str(b['sigma_leq_tau']).lower()}; "
          f"tau <= sigma: {str(b['tau_leq_sigma']).lower()}")
    return EXIT_OK


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _fmt_complex(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def cmd_diag(args) -> int:
    X = parse_matrix(_read_text(args.matrix))
    if is_cycle_text(args.sigma) and max_label(args.sigma) > X.n:
        raise DegreeMismatch(f"{args.sigma} mentions labels beyond the {X.n}x{X.n} matrix")
    sigma = _parse_single(args.sigma, X.n)
    v = generalized_diagonal(X, sigma)
    print(f"sigma: {format_cycles(sigma)}")
    print(f"magnitude: {v.magnitude!r}")
    print(f"log_magnitude: {v.log_magnitude!r}")
    print(f"phase: {'unset' if v.phase is None else _fmt_complex(v.phase)}")
    print(f"real: {str(v.is_real).lower()}")
    print(f"sign: {'unset' if v.sign is None else f'{v.sign:+d}'}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.counterexample:
        if args.p is None or args.q is None:
            raise UsageError("--counterexample needs --p and --q")
        try:
            spec = CounterexampleSpec(args.n, args.p, args.q, args.epsilon)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        X = epsilon_gram(spec)
    else:
        try:
            spec = GeneratorSpec(
                n=args.n,
                seed=args.seed,
                field=Field.REAL if args.real else Field.COMPLEX,
                kind=Kind.PD if args.pd else Kind.PSD,
                rank=args.rank,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        X = random_gram(spec)
    sys.stdout.write(format_matrix(X))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.poset:
        if not 0 <= args.n <= MAX_POSET_N:
            raise UsageError(f"--poset supports 0 <= n <= {MAX_POSET_N}")
        rep = exhaustive_poset(args.n)
        results = rep.to_dict()
        failures = [{"kind": "axiom", "detail": d} for d in results.pop("axiom_failures")]
        failures += [
            {"kind": "bruhat_containment", "detail": d}
            for d in results.pop("bruhat_containment_failures")
        ]
        _emit_json("verify", {"mode": "poset", "n": args.n}, results, failures)
    else:
        if not 0 <= args.n <= MAX_AUDIT_N:
            raise UsageError(f"--audit supports 0 <= n <= {MAX_AUDIT_N}")
        trials = args.trials if args.trials is not None else (100 if args.n <= 4 else 20)
        if trials < 1:
            raise UsageError("--trials must be at least 1")
        rep = full_theorem_audit(args.n, trials, args.seed)
        results = rep.to_dict()
        failures = results.pop("failures")
        params = {"mode": "audit", "n": args.n, "trials": trials, "seed": args.seed}
        _emit_json("verify", params, results, failures)
    return EXIT_OK if not failures else EXIT_FAILED


@dataclass
class HasseGraph:
    nodes: list[str]
    edges: list[tuple[str, str]] = field(default_factory=list)

    def to_dot(self, name: str = "hasse") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        lines += [f'  "{v}";' for v in self.nodes]
        lines += [f'  "{a}" -> "{b}";' for a, b in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _covers(up: list[set[int]]) -> list[tuple[int, int]]:
    edges = []
    for a, above in enumerate(up):
        strict = above - {a}
        between = set().union(*(up[c] - {c} for c in strict)) if strict else set()
        edges += [(a, b) for b in strict - between]
    return edges


def hasse_graph(n: int, classes: bool = True) -> HasseGraph:
    """Covering relations of the class order (or of ``<=_c`` on permutations)."""
    perms = list(all_permutations(n))
    up = cycle_leq_upsets(perms)
    if classes:
        reps, _, cls_up = class_upsets(perms, up)
        labels = [str(r) for r in reps]
        rel = cls_up
    else:
        order = sorted(range(len(perms)), key=lambda i: sorted(perms[i].nontrivial_cycles))
        pos = {i: k for k, i in enumerate(order)}
        labels = [format_cycles(perms[i]) for i in order]
        rel = [{pos[j] for j in up[i]} for i in order]
    edges = sorted(_covers(rel))
    return HasseGraph(labels, [(labels[a], labels[b]) for a, b in edges])


def cmd_hasse(args) -> int:
    if not 0 <= args.n <= MAX_POSET_N:
        raise UsageError(f"hasse supports 0 <= n <= {MAX_POSET_N}")
    g = hasse_graph(args.n, classes=args.order == "classes")
    sys.stdout.write(g.to_dot())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gendiag",
        description="Compare generalized diagonals of positive semi-definite matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide how X_sigma and X_tau compare")
    p.add_argument("sigma", help='cycle form "(1 3 2)(4 5)" or one-line "3 1 2 5 4"')
    p.add_argument("tau")
    p.add_argument("--setting", choices=[s.value for s in Setting], default="abs",
                   help="abs: |X_s| vs |X_t| over complex PSD; complex / real: signed products")
    p.add_argument("--n", type=int, help="degree for cycle-form arguments")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diag", help="evaluate a generalized diagonal of a matrix file")
    p.add_argument("matrix", help="matrix file, or - for standard input")
    p.add_argument("sigma")
    p.set_defaults(func=cmd_diag)

    p = sub.add_parser("gen", help="write a matrix to standard output")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--psd", action="store_true", help="random Gram matrix B B*")
    kind.add_argument("--pd", action="store_true", help="random Gram matrix certified PD")
    kind.add_argument("--counterexample", action="store_true",
                      help="Gram matrix with a_pq = a_qp = epsilon, other entries > 1")
    fld = p.add_mutually_exclusive_group()
    fld.add_argument("--real", action="store_true")
    fld.add_argument("--complex", action="store_true", help="default")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int, help="columns of B for --psd (default n)")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run an exhaustive check; JSON report on stdout")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--poset", action="store_true", help="order axioms and Bruhat containment")
    mode.add_argument("--audit", action="store_true", help="every pair against sampled matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, help="per pair (default 100 for n <= 4, else 20)")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hasse", help="DOT digraph of covering relations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", choices=["classes", "permutations"], default="classes")
    p.set_defaults(func=cmd_hasse)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DegreeMismatch as exc:
        print(f"gendiag: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (UsageError, MalformedInput) as exc:
        print(f"gendiag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GendiagError as exc:
        print(f"gendiag: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
