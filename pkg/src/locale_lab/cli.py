"""Command line: ``analyze``, ``check``, ``random`` and ``cofinite``.

Exit codes: 0 all checks passed, 1 a law failed, 2 bad input, 3 some
phase was skipped by a size cap and nothing failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .classify import (
    coframe_proposition,
    prime_dossier,
    theorem_scattered,
    theorem_TD,
    theorem_totally_spatial,
)
from .cofinite import cf_classification, cf_primes_facts, window_oracle
from .errors import CapExceeded, InconsistencyError, InputError, LocaleLabError
from .formats import ParsedInput, parse_input
from .galois import (
    DEFAULT_MAX_SUBSETS,
    assembly_spectrum_vs_skula,
    check_adjunction,
    check_conucleus,
    check_main_diagram,
)
from .lattice import DEFAULT_MAX_ELEMENTS, FiniteLattice, atoms, coatoms, is_boolean
from .spaces import (
    DEFAULT_MAX_POINTS,
    alexandroff_space,
    frame_from_poset_upsets,
    frame_from_space,
    is_T0,
    random_space,
)
from .spectrum import (
    is_completely_prime,
    is_completely_prime_exhaustive,
    is_discrete,
    is_scattered_space,
    is_sober,
    is_spatial,
    is_TD_space,
    primes,
    skula_space,
    spectrum_space,
)
from .sublocales import DEFAULT_MAX_ASSEMBLY, enumerate_sublocales, two_element_sublocales

SCHEMA = "locale-lab/report/1"
RANDOM_SCHEMA = "locale-lab/random/1"
COFINITE_SCHEMA = "locale-lab/cofinite/1"

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_SKIPPED = 0, 1, 2, 3

SUITES = {
    "td": "TD",
    "total": "TOTALLY_SPATIAL",
    "scattered": "SCATTERED",
    "coframe": "COFRAME_PROP",
}
PHASES = ("build", "spectrum", "space", "sublocales", "galois", "classify")
BACKEND_CHECK_MAX = 14


@dataclass(frozen=True)
class Flags:
    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_assembly: int = DEFAULT_MAX_ASSEMBLY
    max_subsets: int = DEFAULT_MAX_SUBSETS
    max_points: int = DEFAULT_MAX_POINTS
    suites: tuple = tuple(SUITES)
    phases: tuple = PHASES
    all_witnesses: bool = False


@dataclass
class Phase:
    name: str
    status: str  # ok | failed | skipped | error
    data: dict = field(default_factory=dict)
    reason: Optional[str] = None
    ms: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        out = {"name": self.name, "status": self.status, "data": self.data}
        if self.reason is not None:
            out["reason"] = self.reason
        if timing:
            out["ms"] = round(self.ms, 3)
        return out


@dataclass
class AnalysisReport:
    input: dict
    phases: list = field(default_factory=list)

    def phase(self, name: str) -> Optional[Phase]:
        for ph in self.phases:
            if ph.name == name:
                return ph
        return None

    @property
    def status(self) -> str:
        states = {ph.status for ph in self.phases}
        if states & {"failed", "error"}:
            return "failed"
        if "skipped" in states:
            return "skipped"
        return "ok"

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "failed": EXIT_FAILED, "skipped": EXIT_SKIPPED}[self.status]

    @property
    def summary(self) -> dict:
        def get(phase, key):
            ph = self.phase(phase)
            return ph.data.get(key) if ph is not None else None

        return {
            "elements": get("build", "elements"),
            "primes": get("build", "primes"),
            "sublocales": get("sublocales", "count"),
        }

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "input": self.input,
            "summary": self.summary,
            "status": self.status,
            "exit_code": self.exit_code,
            "phases": [ph.to_dict(timing) for ph in self.phases],
        }
        if timing:
            out["total_ms"] = round(sum(ph.ms for ph in self.phases), 3)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False)


def strip_timing(doc):
    """Copy of a report document without its timing fields."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k not in ("ms", "total_ms")}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def _label(L: FiniteLattice, i: int) -> str:
    lab = L.labels[i] if L.labels is not None else i
    if isinstance(lab, frozenset):
        return "{" + ",".join(sorted(map(str, lab))) + "}"
    return str(lab)


def _run_phase(name: str, body: Callable[[], tuple]) -> Phase:
    t0 = time.perf_counter()
    try:
        ok, data = body()
        ph = Phase(name, "ok" if ok else "failed", data)
    except CapExceeded as exc:
        ph = Phase(name, "skipped", reason=str(exc))
    except InconsistencyError as exc:
        ph = Phase(name, "failed", reason=f"inconsistency: {exc}")
    except LocaleLabError as exc:
        ph = Phase(name, "error", reason=f"{type(exc).__name__}: {exc}")
    ph.ms = (time.perf_counter() - t0) * 1000.0
    return ph


def _skip(name: str, needs: str) -> Phase:
    return Phase(name, "skipped", reason=f"needs the {needs} phase")


def run_analyze(parsed: ParsedInput, flags: Flags = Flags()) -> AnalysisReport:
    report = AnalysisReport(
        {"kind": parsed.kind, "name": parsed.name, "points": list(parsed.points)}
    )
    state: dict = {}
    space = parsed.space if parsed.kind == "space" else alexandroff_space(parsed.poset)

    def build():
        data = {}
        ok = True
        if parsed.kind == "space":
            L = frame_from_space(space, flags.max_elements)
        else:
            L = frame_from_poset_upsets(parsed.poset, max_elements=flags.max_elements)
            other = frame_from_space(space, flags.max_elements)
            same = sorted(map(sorted, L.labels)) == sorted(map(sorted, other.labels))
            data["upsets_match_alexandroff_opens"] = same
            ok &= same
        state["L"] = L
        data.update(
            elements=L.n,
            primes=len(primes(L)),
            boolean=is_boolean(L),
            atoms=len(atoms(L)),
            coatoms=len(coatoms(L)),
        )
        return ok, data

    def spectrum():
        L = state["L"]
        ps = sorted(primes(L))
        spatial = is_spatial(L)
        cp = {}
        agree = True
        for p in ps:
            cp[_label(L, p)] = is_completely_prime(L, p)
            if L.n <= 16:
                agree &= is_completely_prime_exhaustive(L, p) == cp[_label(L, p)]
        spec = spectrum_space(L)
        data = {
            "prime_count": len(ps),
            "primes": [_label(L, p) for p in ps],
            "spatial": spatial,
            "completely_prime": cp,
            "completely_prime_routes_agree": agree,
            "spectrum_TD": is_TD_space(spec.carrier),
            "spectrum_sober": is_sober(spec.carrier),
        }
        # finite frames are spatial; the spectrum of a finite frame is sober
        return spatial and agree and data["spectrum_sober"], data

    def space_phase():
        X = space
        t0 = is_T0(X)
        sober = is_sober(X)
        td = is_TD_space(X)
        scattered = is_scattered_space(X, flags.max_points)
        skula_discrete = is_discrete(skula_space(X))
        data = {
            "points": X.size,
            "T0": t0,
            "sober": sober,
            "TD": td,
            "scattered": scattered,
            "skula_discrete": skula_discrete,
        }
        ok = sober == t0 and scattered == t0
        if t0:
            ok &= td == skula_discrete
        return ok, data

    def sublocales():
        L = state["L"]
        subs = enumerate_sublocales(L, flags.max_assembly)
        state["coframe"] = subs
        data = {"count": len(subs), "two_element": len(two_element_sublocales(L))}
        ok = True
        if L.n <= BACKEND_CHECK_MAX:
            other = enumerate_sublocales(L, flags.max_assembly, method="closure")
            same = [S.mask for S in other] == [S.mask for S in subs]
            data["backends_agree"] = same
            ok &= same
        if len(subs) <= flags.max_elements:
            # raises NotDistributive if the order-dual is not a frame
            subs.dual_lattice
            data["coframe_validated"] = True
        else:
            raise CapExceeded("sublocale coframe validation", len(subs), flags.max_elements)
        return ok, data

    def galois():
        L, subs = state["L"], state["coframe"]
        kw = dict(coframe=subs, all_witnesses=flags.all_witnesses)
        reports = [
            check_adjunction(L, flags.max_assembly, flags.max_subsets, **kw),
            check_conucleus(L, flags.max_assembly, **kw),
            check_main_diagram(L, flags.max_assembly, flags.max_subsets, **kw),
            assembly_spectrum_vs_skula(L, flags.max_assembly, **kw),
        ]
        return all(r.ok for r in reports), {"reports": [r.to_dict() for r in reports]}

    def classify():
        L = state["L"]
        subs = state.get("coframe")
        out = []
        for key in flags.suites:
            if key == "coframe":
                out.append(coframe_proposition(L, flags.max_subsets))
                continue
            if subs is None:
                raise CapExceeded("sublocale enumeration", L.n, flags.max_assembly)
            fn = {"td": theorem_TD, "total": theorem_totally_spatial, "scattered": theorem_scattered}[key]
            out.append(fn(L, flags.max_assembly, flags.max_subsets, subs))
        dossiers = {}
        for p in sorted(primes(L)):
            d = prime_dossier(L, p, flags.max_subsets)
            dossiers[_label(L, p)] = {
                "weakly_covered": d.weakly_covered,
                "covered": d.covered,
                "completely_prime": d.completely_prime,
                "isolated_in_skula": d.isolated_in_skula,
                "isolated_in_upset_spectrum": d.isolated_in_upset_spectrum,
            }
        ok = all(r.agreement and r.all_true for r in out)
        return ok, {"suites": [r.to_dict() for r in out], "prime_dossiers": dossiers}

    bodies = {
        "build": build,
        "spectrum": spectrum,
        "space": space_phase,
        "sublocales": sublocales,
        "galois": galois,
        "classify": classify,
    }
    for name in PHASES:
        if name not in flags.phases:
            continue
        if name in ("spectrum", "sublocales", "classify") and "L" not in state:
            report.phases.append(_skip(name, "build"))
        elif name == "galois" and "coframe" not in state:
            report.phases.append(_skip(name, "sublocales"))
        else:
            report.phases.append(_run_phase(name, bodies[name]))
    return report


# random suite


def _trial(args) -> dict:
    trial_seed, max_points, flags = args
    n = trial_seed % max_points + 1
    X = random_space(n, trial_seed, 0.5, flags.max_points)
    parsed = ParsedInput("space", f"random-{trial_seed}", space=X)
    rep = run_analyze(parsed, flags)
    return {
        "seed": trial_seed,
        "points": n,
        "elements": rep.summary["elements"],
        "sublocales": rep.summary["sublocales"],
        "status": rep.status,
    }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LOCALE_LAB_THREADS", "1")))
    except ValueError:
        return 1


def run_random_suite(trials: int, max_points: int, seed: int, flags: Flags = Flags()) -> dict:
    """Analyze ``trials`` random spaces; trial ``i`` uses seed ``seed + i``
    and ``(seed + i) % max_points + 1`` points."""
    if max_points < 1:
        raise ValueError("max_points must be positive")
    if max_points > flags.max_points:
        raise CapExceeded("random space points", max_points, flags.max_points)
    jobs = [(seed + i, max_points, flags) for i in range(trials)]
    workers = _threads()
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial, jobs))
    else:
        results = [_trial(j) for j in jobs]
    failed = [r for r in results if r["status"] == "failed"]
    skipped = [r for r in results if r["status"] == "skipped"]
    return {
        "schema": RANDOM_SCHEMA,
        "trials": trials,
        "max_points": max_points,
        "seed": seed,
        "passed": sum(r["status"] == "ok" for r in results),
        "failed": len(failed),
        "skipped": len(skipped),
        "first_failing_seed": failed[0]["seed"] if failed else None,
        "results": results,
    }


def _random_exit(summary: dict) -> int:
    if summary["failed"]:
        return EXIT_FAILED
    if summary["skipped"]:
        return EXIT_SKIPPED
    return EXIT_OK


# cofinite


def run_cofinite(seed: int = 0, window: int = 4, oracle_max: int = 6) -> dict:
    report = cf_classification(seed, window)
    facts = cf_primes_facts(seed, window)
    oracles = {str(m): window_oracle(m) for m in range(1, oracle_max + 1)}
    expected = {"totally_spatial": True, "TD": False, "scattered": False}
    ok = (
        report.verdicts == expected
        and facts.ok
        and all(all(r.values()) for r in oracles.values())
    )
    return {
        "schema": COFINITE_SCHEMA,
        "ok": ok,
        "expected": expected,
        "classification": report.to_dict(),
        "facts": facts.to_dict(),
        "window_oracles": oracles,
    }


# rendering


def _render_analysis(doc: dict) -> str:
    inp = doc["input"]
    lines = [f"{inp['kind']} {inp['name']}: {len(inp['points'])} points"]
    s = doc["summary"]
    lines.append(
        f"  elements={s['elements']} primes={s['primes']} sublocales={s['sublocales']}"
    )
    for ph in doc["phases"]:
        extra = f" ({ph['reason']})" if "reason" in ph else ""
        timing = f" {ph['ms']:.1f} ms" if "ms" in ph else ""
        lines.append(f"  {ph['name']:<11} {ph['status']:<8}{timing}{extra}")
        data = ph["data"]
        if not data:
            continue
        if ph["name"] == "space":
            flags = " ".join(f"{k}={v}" for k, v in data.items() if k != "points")
            lines.append(f"      {flags}")
        if ph["name"] == "galois":
            for r in data["reports"]:
                bad = [k for k, v in r["verdicts"].items() if not v]
                lines.append(f"      {r['name']:<22} {'ok' if r['ok'] else 'FAILED ' + ','.join(bad)}")
        if ph["name"] == "classify":
            for r in data["suites"]:
                n_true = sum(r["verdicts"].values())
                lines.append(
                    f"      {r['tag']:<16} agreement={r['agreement']} "
                    f"[{n_true}/{len(r['verdicts'])} true]"
                )
    lines.append(f"status: {doc['status']} (exit {doc['exit_code']})")
    return "\n".join(lines)


def _render_random(doc: dict) -> str:
    lines = [
        f"random suite: {doc['trials']} trials, up to {doc['max_points']} points, seed {doc['seed']}",
        f"  passed={doc['passed']} failed={doc['failed']} skipped={doc['skipped']}",
    ]
    if doc["first_failing_seed"] is not None:
        s = doc["first_failing_seed"]
        lines.append(
            f"  first failing seed: {s} (replay: locale-lab random --trials 1 "
            f"--seed {s} --max-points {doc['max_points']})"
        )
    return "\n".join(lines)


def _render_cofinite(doc: dict) -> str:
    c = doc["classification"]
    lines = ["cofinite frame on a countably infinite set"]
    for k, v in c["verdicts"].items():
        w = c["witnesses"].get(k)
        lines.append(f"  {k:<16} {v}" + (f"  witness: {w}" if w else ""))
    for cert in doc["facts"]["certificates"]:
        lines.append(f"  [{'ok' if cert['holds'] else 'FAIL'}] {cert['statement']}")
    for m, r in doc["window_oracles"].items():
        lines.append(f"  window oracle m={m}: {'ok' if all(r.values()) else 'FAIL'}")
    lines.append(f"status: {'ok' if doc['ok'] else 'failed'}")
    return "\n".join(lines)


def _emit(doc: dict, fmt: str, render, out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(render(doc) + "\n")


# argument parsing


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    p.add_argument("--max-assembly", type=int, default=DEFAULT_MAX_ASSEMBLY,
                   help="cap on lattice size for sublocale enumeration")
    p.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS,
                   help="cap on primes for exhaustive subset quantification")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields")
    p.add_argument("--all-witnesses", action="store_true")


def _flags(args, **extra) -> Flags:
    return Flags(
        max_elements=args.max_elements,
        max_assembly=args.max_assembly,
        max_subsets=args.max_subsets,
        all_witnesses=args.all_witnesses,
        **extra,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locale-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis of a space or poset file")
    p.add_argument("input")
    _add_caps(p)

    p = sub.add_parser("check", help="run theorem suites on a space or poset file")
    p.add_argument("input")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    _add_caps(p)

    p = sub.add_parser("random", help="analyze random spaces")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _add_caps(p)

    p = sub.add_parser("cofinite", help="classify the cofinite frame")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--oracle-max", type=int, default=6)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)

    if args.command == "cofinite":
        doc = run_cofinite(args.seed, args.window, args.oracle_max)
        _emit(doc, args.format, _render_cofinite, out)
        return EXIT_OK if doc["ok"] else EXIT_FAILED

    if args.command == "random":
        try:
            doc = run_random_suite(args.trials, args.max_points, args.seed, _flags(args))
        except (CapExceeded, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        _emit(doc, args.format, _render_random, out)
        return _random_exit(doc)

    try:
        parsed = parse_input(args.input)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "check":
        suites = tuple(SUITES) if args.suite == "all" else (args.suite,)
        phases = ("build", "classify")
        if suites != ("coframe",):
            phases = ("build", "sublocales", "classify")
        flags = _flags(args, suites=suites, phases=phases)
    else:
        flags = _flags(args)
    report = run_analyze(parsed, flags)
    _emit(report.to_dict(not args.no_timing), args.format, _render_analysis, out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
