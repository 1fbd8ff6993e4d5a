"""Acceptance suite: one PASS/FAIL line per criterion.

Run standalone with ``python tests/test_acceptance.py`` or through pytest, where
the lines are repeated in the terminal summary.
"""
import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import REPAIRED_SCOPES  # noqa: E402
from randgen import random_problem  # noqa: E402
from test_compiler import ATOMS, PAIRS, _props  # noqa: E402
from test_sat import random_cnf, satisfies, solver_for, truth_table  # noqa: E402
from test_translator import CMPS, OPS  # noqa: E402

from metareason.compiler import KEYWORDS, expand_qualifier  # noqa: E402
from metareason.instance import ScopeConfig  # noqa: E402
from metareason.kernel import ConcreteInstance, Relation, evaluate, mk_tupleset, mk_universe  # noqa: E402
from metareason.kernel import ast as A  # noqa: E402
from metareason.kernel.brute import count_models, exists_model  # noqa: E402
from metareason.kernel.evaluate import Evaluator, arith, int_range  # noqa: E402
from metareason.pipeline import Analysis, load_instance, load_metamodel  # noqa: E402
from metareason.sat import Solver, minimize_core  # noqa: E402
from metareason.translate import interpret, translate  # noqa: E402
from metareason.translate import ints  # noqa: E402
from metareason.translate.circuit import Circuit, evaluate_value  # noqa: E402

FIX = Path(__file__).resolve().parents[1] / "fixtures"
RESULTS: list[str] = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _repaired():
    mm = load_metamodel(FIX / "tol.aie")
    inst = load_instance(FIX / "repaired.ais", mm)
    return mm, Analysis(mm, inst, ScopeConfig(**REPAIRED_SCOPES))


def criterion_1():
    t = time.perf_counter()
    out = Analysis(load_metamodel(FIX / "tol.aie")).solve()
    dt = time.perf_counter() - t
    return report(1, out.sat and dt < 10, f"tol check-meta {'SAT' if out.sat else 'UNSAT'} in {dt:.2f}s (limit 10s)")


def criterion_2():
    mm = load_metamodel(FIX / "tol.aie")
    out = Analysis(mm, load_instance(FIX / "cyclic.ais", mm)).solve()
    core = set() if out.sat else {(c.id, c.formula) for c in out.diagnosis.core}
    ids = {i for i, _ in core}
    fact = next((f for i, f in core if i.startswith("fact/")), "")
    ok = ids == {"qualifier/cdr/acyclic", "fact/1"} and "t0" in fact and "cdr" in fact
    return report(2, ok, f"core = {sorted(ids)}")


def criterion_3():
    mm, an = _repaired()
    n, bad = 0, []
    for rep in an.completions():
        n += 1
        objs = list(rep.objects())
        nils = [o for o, c, _ in objs if c == "Nil"]
        inferred_trucks = [o for o, c, inf in objs if c == "TruckList" and inf]
        vehicles = {o for o, c, _ in objs if mm.is_subtype(c, "EnginedVehicle")}
        named = any(l.feature == "name" and l.source in vehicles and l.value == "Ford F-150 XLT"
                    for l, _, _ in rep.links())
        lists = {o for o, c, _ in objs if mm.is_subtype(c, "List")}
        eq = {(l.source, l.value) for l, _, _ in rep.links() if l.feature == "eq"}
        refl = all((x, x) in eq for x in lists)
        if not (len(nils) == 1 and inferred_trucks and named and refl):
            bad.append(n)
    return report(3, n > 0 and not bad, f"{n} completions checked, {len(bad)} violating")


def criterion_4():
    _, an = _repaired()
    t = time.perf_counter()
    sat_count = sum(1 for _ in an.completions())
    t_sat = time.perf_counter() - t
    prep = an.prepared
    t = time.perf_counter()
    brute = count_models([c.formula for c in prep.problem.constraints], prep.bounds, an.scope.bitwidth)
    t_brute = time.perf_counter() - t
    ok = sat_count == brute and t_sat + t_brute < 60
    return report(4, ok, f"enumerated {sat_count}, brute force {brute}; {t_sat:.1f}s + {t_brute:.1f}s (limit 60s)")


def criterion_5():
    total = agree = 0
    for with_ints in (False, True):
        for seed in range(200):
            p, b = random_problem(1000 * with_ints + seed, max_atoms=6, max_relations=3, depth=4, with_ints=with_ints)
            tr = translate(p, b)
            res = tr.new_solver().solve(tr.selectors)
            ok = bool(res) == exists_model([c.formula for c in p.constraints], b, p.bitwidth)
            if ok and res:
                ev = Evaluator(interpret(tr, res.assignment))
                ok = all(ev.formula(c.formula, {}) for c in p.constraints)
            total += 1
            agree += ok
    return report(5, agree == total, f"{agree}/{total} random problems agree with the evaluator")


def criterion_6():
    u = mk_universe(ATOMS)
    D, r = Relation("D", 1), Relation("r", 2)
    dom = mk_tupleset(u, 1, [(a,) for a in ATOMS])
    formulas = {k: expand_qualifier(k, r, A.RelRef("D"), A.RelRef("D")) for k in KEYWORDS}
    wrong = set()
    for bits in range(1 << len(PAIRS)):
        pairs = frozenset(p for i, p in enumerate(PAIRS) if bits >> i & 1)
        inst = ConcreteInstance(u, {D: dom, r: mk_tupleset(u, 2, pairs)})
        expected = _props(pairs)
        wrong |= {k for k, f in formulas.items() if evaluate(inst, f) != expected[k]}
    return report(6, not wrong, f"{len(KEYWORDS)} keywords x 512 relations, mismatching: {sorted(wrong) or 'none'}")


def criterion_7():
    rng = random.Random(2024)
    bad = 0
    for i in range(1000):
        n = rng.randint(1, 20)
        clauses = random_cnf(rng, n, rng.randint(1, 5 * n), rng.choice((2, 3)))
        r = solver_for(n, clauses).solve()
        if bool(r) != truth_table(n, clauses) or (r and not satisfies(r.assignment, clauses)):
            bad += 1
    cores = core_bad = 0
    while cores < 100:
        n, k = rng.randint(3, 10), rng.randint(2, 6)
        sels = list(range(n + 1, n + k + 1))
        clauses = random_cnf(rng, n, rng.randint(2, 3 * n)) + [[-s] + c for s in sels for c in random_cnf(rng, n, 2)]
        s = solver_for(n + k, clauses)
        r = s.solve(sels)
        if r:
            continue
        core = minimize_core(s, r.failed)
        unsat = not solver_for(n + k, clauses).solve(core)
        minimal = all(solver_for(n + k, clauses).solve([l for l in core if l != x]) for x in core)
        core_bad += not (unsat and minimal)
        cores += 1
    return report(7, bad == 0 and core_bad == 0,
                  f"1000 CNFs (<=20 vars): {bad} disagreements; 100 cores: {core_bad} not UNSAT-and-1-minimal")


def criterion_8():
    bw = 4
    c = Circuit()
    a = [c.fresh() for _ in range(bw)]
    b = [c.fresh() for _ in range(bw)]
    outs = {op: fn(c, a, b) for op, fn in OPS.items()}
    cmps = {op: fn(c, a, b) for op, fn in CMPS.items()}
    s = Solver(c.num_vars)
    for cl in c.clauses:
        s.add_clause(cl)
    checked = bad = 0
    truth = {"<": lambda x, y: x < y, ">": lambda x, y: x > y, "=": lambda x, y: x == y}
    for x, y in itertools.product(int_range(bw), repeat=2):
        assume = [v if (x >> i) & 1 else -v for i, v in enumerate(a)]
        assume += [v if (y >> i) & 1 else -v for i, v in enumerate(b)]
        res = s.solve(assume)
        for op, bits in outs.items():
            if op == "/" and y == 0:
                continue
            checked += 1
            bad += ints.value_of(bits, res.assignment) != arith(op, x, y, bw)
        for op, lit in cmps.items():
            checked += 1
            bad += evaluate_value(lit, res.assignment) != truth[op](x, y)
    return report(8, bad == 0, f"{checked} operand/operator cases at bitwidth 4, {bad} wrong (division by zero excluded)")


def criterion_9():
    line = ("criterion 9: OUT OF SCOPE - industrial case-study element counts and reasoning time "
            "depend on inputs that are not available; criteria 4-8 cover the same machinery")
    RESULTS.append(line)
    print(line)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(check):
    assert check()


def test_criterion_9_out_of_scope():
    criterion_9()
    pytest.skip("case-study inputs are proprietary; documented as out of scope")


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    criterion_9()
    sys.exit(0 if all(results) else 1)
