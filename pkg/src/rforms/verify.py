"""
Suite orchestration and line-delimited reports.

A run expands the selected suites into independent tasks, executes them on a
thread pool and returns one CheckReport per task in a fixed order.  Reports
are serialized as JSON lines: a header carrying the schema version and the
configuration, then one record per check.  Only exact results decide a
status; the optional t0 specialization is recorded next to it as a hint.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .outcome import Outcome
from .rmatrix import SeriesError, SeriesSpec, build_rmatrix, build_series
from .scalar import ONE, Scalar, ScalarError, parse_scalar

__all__ = [
    "SCHEMA",
    "SCHEMA_VERSION",
    "SUITES",
    "ConfigError",
    "RunConfig",
    "CheckReport",
    "plan",
    "run",
    "serialize",
    "parse_report",
    "report_diff",
    "exit_code",
    "EXPECTED_RANK",
]

SCHEMA = "rforms-report"
SCHEMA_VERSION = 1
SUITES = ("axioms", "yd", "classify", "bwm", "functionals", "modular", "toy")

# dim of the image of the three-strand algebra in End(V^(x)3)
EXPECTED_RANK = {
    ("GL", 2): 5, ("GL", 3): 6, ("SL", 2): 5, ("SL", 3): 6,
    ("O", 3): 15, ("O", 4): 15, ("Sp", 2): 5, ("Sp", 4): 14, ("Sp", 6): 15,
}

# sampling caps for the degree-3 runs; degree 2 is always exhaustive
_DEG3_LIMIT = 400


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    series: str
    N: int
    z_choice: str = "generic"
    zeta_list: tuple = ()
    degree_bound: int = 2
    suites: tuple = SUITES
    output_path: str | None = None
    threads: int = 0
    t0: Fraction | None = None
    invert_q: bool = False

    def validate(self) -> SeriesSpec:
        if not 1 <= self.degree_bound <= 3:
            raise ConfigError(f"degree bound must be between 1 and 3, got {self.degree_bound}")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; choose from {', '.join(SUITES)}")
        if not self.suites:
            raise ConfigError("no suites selected")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        try:
            return build_series(self.series, self.N)
        except SeriesError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self):
        return {
            "series": self.series, "N": self.N, "z": self.z_choice,
            "zeta": list(self.zeta_list), "degree": self.degree_bound,
            "suites": list(self.suites), "t0": None if self.t0 is None else str(self.t0),
            "invert_q": self.invert_q,
        }


@dataclass
class CheckReport:
    check_id: str
    anchor: str
    status: str
    witness: str | None = None
    wall_time_ms: int = 0
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and not self.witness:
            self.witness = "(no witness recorded)"

    def record(self, timing=False):
        out = {"check": self.check_id, "anchor": self.anchor, "status": self.status,
               "witness": self.witness, "values": self.values}
        if timing:
            out["wall_time_ms"] = self.wall_time_ms
        return out


@dataclass(frozen=True)
class _Task:
    check_id: str
    anchor: str
    fn: object


class _Skip(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return str(x)


def _dense(M):
    return [[str(v) for v in row] for row in M.to_dense()]


def _from_outcome(o: Outcome, **values):
    vals = dict(values)
    if o.count:
        vals.setdefault("count", o.count)
    for k, v in (o.detail or {}).items():
        vals.setdefault(k, v)
    return o.passed, o.witness, vals


# context shared by the tasks of one run; everything in it is built up front


@dataclass
class _Context:
    config: RunConfig
    spec: SeriesSpec
    z: Scalar
    zetas: tuple
    D: int

    def slice(self):
        from .words import build_relation_slice
        return build_relation_slice(self.spec, self.D)

    def limit(self):
        return None if self.D <= 2 else _DEG3_LIMIT


def _parse_z(spec, text):
    if text in (None, "", "generic"):
        return spec.z_default
    try:
        return parse_scalar(text, spec.root)
    except ScalarError as exc:
        raise ConfigError(f"--z: {exc}") from exc


def _default_zetas(spec):
    for cand in (Scalar(2), Scalar(-1), ONE):
        if spec.admissible_zeta(cand):
            return (cand,)
    return (ONE,)


def _parse_zetas(spec, texts):
    if not texts:
        return _default_zetas(spec)
    out = []
    for text in texts:
        try:
            zeta = parse_scalar(text, spec.root)
        except ScalarError as exc:
            raise ConfigError(f"--zeta: {exc}") from exc
        if not spec.admissible_zeta(zeta):
            raise ConfigError(f"--zeta {text} is not admissible for {spec.label}")
        out.append(zeta)
    return tuple(out)


def _make_context(config: RunConfig) -> _Context:
    spec = config.validate()
    z = _parse_z(spec, config.z_choice)
    from .bichar import InadmissibleParameter, make_rform
    try:
        make_rform(spec, z)
    except InadmissibleParameter as exc:
        raise ConfigError(f"--z: {exc}") from exc
    ctx = _Context(config, spec, z, _parse_zetas(spec, config.zeta_list), config.degree_bound)
    if {"axioms", "yd", "functionals"} & set(config.suites):
        ctx.slice()  # resource bounds surface here, before any task starts
    return ctx


# suites


def _precheck_zero(ctx, m):
    from .linalg import matrix_is_zero_at
    if ctx.config.t0 is None:
        return None
    return {"t0": str(ctx.config.t0), "zero_at_t0": matrix_is_zero_at(m, ctx.config.t0)}


def _axioms_tasks(ctx: _Context):
    from .bichar import (check_cb, check_cqt, check_well_defined, convolve, cross_order_check,
                         exchange_check, make_central_bichar, make_rform, make_sform, unitality_check,
                         Bicharacter)
    from .rmatrix import braid_defect_of, ybe_defect_of
    spec, N = ctx.spec, ctx.spec.N

    def rmatrix_identities():
        b = build_rmatrix(spec)
        ybe = ybe_defect_of(b.R, N)
        braid = braid_defect_of(b.Rhat, N)
        vals = {"ybe_defect_zero": ybe.is_zero(), "braid_defect_zero": braid.is_zero(),
                "minimal_polynomial": b.minimal_polynomial_str()}
        pre = _precheck_zero(ctx, ybe)
        if pre is not None:
            vals["precheck"] = pre
        ok = ybe.is_zero() and braid.is_zero()
        return ok, None if ok else "nonzero YBE or braid defect", vals

    def hecke():
        b = build_rmatrix(spec)
        if spec.family != "A":
            vals = {"eigenvalues": [str(e) for e in b.eigenvalues], "ehat_scalar": str(b.ehat_scalar)}
            return True, None, vals
        ok = set(b.eigenvalues) == {spec.q, -spec.q.inverse()}
        return ok, None if ok else f"roots {b.minimal_polynomial_str()}", {
            "minimal_polynomial": b.minimal_polynomial_str()}

    def cqt(make):
        def go():
            b = make()
            o = check_cqt(b, ctx.slice(), ctx.D, ctx.limit())
            return _from_outcome(o, tag=b.tag)
        return go

    def perturbed():
        r = make_rform(spec, ctx.z)
        rows = {k: dict(v) for k, v in r.B00.rows.items()}
        r0 = min(rows)
        c0 = min(rows[r0])
        rows[r0][c0] = rows[r0][c0] + ONE
        from .linalg import QMatrix
        pert = Bicharacter(spec, QMatrix(r.B00.row_shape, r.B00.col_shape, rows), "perturbed")
        o = check_cqt(pert, ctx.slice(), ctx.D, ctx.limit())
        ok = (not o.passed) and bool(o.witness)
        return ok, None if ok else "perturbed B00 passed the axioms", {"rejected": not o.passed,
                                                                       "rejection_witness": o.witness}

    def basics():
        r = make_rform(spec, ctx.z)
        parts = [unitality_check(r, ctx.D), exchange_check(r), cross_order_check(r, ctx.D),
                 check_well_defined(r, ctx.slice())]
        return _from_outcome(Outcome.combine("basics", parts))

    tasks = [
        _Task("axioms.rmatrix", "R-matrix: YBE and braid relation", rmatrix_identities),
        _Task("axioms.minimal_polynomial", "R-matrix: eigenvalues of Rhat", hecke),
        _Task("axioms.basics[r]", "r-form: unit, exchange, well-definedness", basics),
        _Task("axioms.cqt[r]", "r-form axioms", cqt(lambda: make_rform(spec, ctx.z))),
        _Task("axioms.cqt[s]", "r-form axioms for the inverse flip", cqt(lambda: make_sform(spec, ctx.z))),
    ]
    for zeta in ctx.zetas:
        tasks.append(_Task(f"axioms.cqt[c({zeta})*r]", "twist by a central bicharacter",
                           cqt(lambda zeta=zeta: convolve(make_central_bichar(spec, zeta), make_rform(spec, ctx.z)))))

        def cb(zeta=zeta):
            o = check_cb(make_central_bichar(spec, zeta), ctx.slice(), ctx.D, ctx.limit())
            return _from_outcome(o)
        tasks.append(_Task(f"axioms.central[{zeta}]", "central bicharacter", cb))
    tasks.append(_Task("axioms.perturbed", "r-form axioms, negative control", perturbed))
    return tasks


def _yd_cases(ctx):
    from .bichar import Bicharacter, convolve, make_central_bichar, make_rform, make_sform
    from .linalg import QMatrix, flip
    spec, N = ctx.spec, ctx.spec.N
    r = make_rform(spec, ctx.z)
    B = r.B00
    pos = [("r", lambda: make_rform(spec, ctx.z)), ("s", lambda: make_sform(spec, ctx.z))]
    for zeta in ctx.zetas:
        pos.append((f"c({zeta})*r", lambda zeta=zeta: convolve(make_central_bichar(spec, zeta),
                                                             make_rform(spec, ctx.z))))

    def pert():
        rows = {k: dict(v) for k, v in B.rows.items()}
        rows[0][0] = rows[0][0] + ONE
        return Bicharacter(spec, QMatrix(B.row_shape, B.col_shape, rows), "perturbed")

    def sign():
        rows = {k: dict(v) for k, v in B.rows.items()}
        c0 = min(rows[1])
        rows[1][c0] = -rows[1][c0]
        return Bicharacter(spec, QMatrix(B.row_shape, B.col_shape, rows), "sign-flipped")

    def r21():
        P = flip(N)
        return Bicharacter(spec, P @ B @ P, "R21")

    neg = [("perturbed", pert), ("sign-flipped", sign), ("R21", r21),
           (f"c({ctx.zetas[0]})", lambda: make_central_bichar(spec, ctx.zetas[0]))]
    return pos, neg


def _yd_tasks(ctx: _Context):
    from .yd import corollary24_check, fundamental_comodule, lemma22_equivalence
    pos, neg = _yd_cases(ctx)
    tasks = []

    def equivalence(make, expect):
        def go():
            b = make()
            o = lemma22_equivalence(b, fundamental_comodule(ctx.spec.N), ctx.slice(), ctx.D)
            verdicts = o.detail
            holds = all(v["yd"] and v["cqt"] for v in verdicts.values())
            ok = o.passed and holds == expect
            wit = o.witness
            if o.passed and holds != expect:
                wit = f"expected the module structures to {'exist' if expect else 'fail'}"
            return ok, wit, {"verdicts": verdicts, "expected": "positive" if expect else "negative"}
        return go

    def slices(make):
        def go():
            o = corollary24_check(make(), ctx.D, ctx.slice())
            return _from_outcome(o)
        return go

    for name, make in pos:
        tasks.append(_Task(f"yd.equivalence[{name}]", "YD modules from an r-form", equivalence(make, True)))
    for name, make in neg:
        tasks.append(_Task(f"yd.equivalence[{name}]", "YD modules from an r-form", equivalence(make, False)))
    for name, make in pos:
        tasks.append(_Task(f"yd.algebra_slices[{name}]", "A as a YD module", slices(make)))
    return tasks


def _classify_tasks(ctx: _Context):
    from . import classify as C
    spec = ctx.spec
    memo = {}

    def report():
        if "rep" not in memo:
            memo["rep"] = C.classify_braid_solutions(spec)
        return memo["rep"]

    def axes():
        rep = report()
        ok = all(rep.axes_certified.values())
        return ok, None if ok else f"axes {rep.axes_certified}", {"axes": rep.axes_certified}

    def span():
        rep = report()
        ok = all(rep.targets.values())
        miss = [k for k, v in rep.targets.items() if not v]
        return ok, None if ok else f"not in the span: {', '.join(miss)}", {
            "route": rep.route, "span_dim": rep.span_dim, "targets": rep.targets,
            "abstract_targets": rep.abstract_targets}

    def variety():
        rep = report()
        extra = [r.as_dict() for r in rep.rays if not r.axis]
        ok = rep.variety_is_axes
        wit = None
        if not ok:
            wit = f"{len(extra)} ray(s) off the axes, e.g. {extra[0]['label']} {extra[0].get('minpoly', '')}".strip()
        return ok, wit, {"rays": [r.as_dict() for r in rep.rays],
                         "rational_variety_is_axes": rep.rational_variety_is_axes,
                         "extra_rays_excluded_as_rforms": rep.extra_rays_excluded}

    def solution_set():
        if ctx.config.invert_q:
            b = build_rmatrix(spec)
            sub = C._Substituted(b.Rhat.subs_power(-1), b.Rhat_inv.subs_power(-1),
                                 tuple(e.subs_power(-1) for e in b.eigenvalues))
            rep = C.classify_braid_solutions(spec, sub, check_extra=False, abstract=False)
        else:
            rep = C.classify_braid_solutions(spec, check_extra=False, abstract=False)
        shape = C._shape_of(rep)
        return True, None, {"shape": shape}

    # on the Rhat^-1 ray the scale enters inverted: z^N = q there means (1/z)^N = q^-1
    expected = {
        "GL": {"Rhat": "z != 0", "Rhat^-1": "z != 0"},
        "SL": {"Rhat": f"z^{spec.N} = {spec.q.inverse()}", "Rhat^-1": f"z^{spec.N} = {spec.q}"},
        "O": {"Rhat": "z^2 = 1", "Rhat^-1": "z^2 = 1"},
        "Sp": {"Rhat": "z^2 = 1", "Rhat^-1": "z^2 = 1"},
    }[spec.series]

    def zcon():
        z = C.z_constraint(spec)
        texts = {k: v.get("text") for k, v in z.items()}
        ok = True
        wits = []
        for k in ("Rhat", "Rhat^-1"):
            if not z[k]["consistent"]:
                ok = False
                wits.append(f"{k}: {z[k]['witness']}")
            elif z[k]["text"].replace(" ", "") != expected[k].replace(" ", ""):
                ok = False
                wits.append(f"{k}: got {z[k]['text']}, want {expected[k]}")
        if z["I"]["consistent"]:
            ok = False
            wits.append("z I passed as an r-form")
        return ok, "; ".join(wits) or None, {"constraints": texts, "I": {
            "convolution_invertible": z["I"]["convolution_invertible"],
            "pairing_consistent": z["I"]["pairing_consistent"], "witness": z["I"]["witness"]}}

    def inversion():
        return _from_outcome(C.inversion_stability(spec))

    return [
        _Task("classify.axes", "braid solutions: axis certification", axes),
        _Task("classify.span", "braid solutions: cubic span", span),
        _Task("classify.variety", "braid solutions: the variety is three axes", variety),
        _Task("classify.solution_set", "braid solutions: shape", solution_set),
        _Task("classify.z_constraint", "scale constraints on the axes", zcon),
        _Task("classify.q_inversion", "braid solutions under q -> q^-1", inversion),
    ]


def _bwm_tasks(ctx: _Context):
    from . import bwm as W
    spec = ctx.spec
    memo = {}

    def pi():
        if "pi" not in memo:
            memo["pi"] = W.build_pi(W.algebra_for(spec), spec, certify=True)
        return memo["pi"]

    def algebra():
        alg = W.algebra_for(spec)
        want = 6 if spec.family == "A" else 15
        ok = alg.dim == want
        return ok, None if ok else f"dimension {alg.dim}", {"name": alg.name, "dim": alg.dim,
                                                           "certificate": alg.certificate}

    def multiplicative():
        p = pi()
        return True, None, {"pairs": p.certificate.get("multiplicative_pairs")}

    def rank():
        p = pi()
        if ctx.config.t0 is not None:
            from .linalg import rank_at
            vecs = p.flattened()
            try:
                pre = rank_at(vecs, ctx.config.t0)
            except ZeroDivisionError:
                pre = "undefined"
            r = W.pi_rank(p, precheck=False)["rank"]
            vals = {"rank": r, "precheck": {"t0": str(ctx.config.t0), "rank_at_t0": pre}}
        else:
            r = W.pi_rank(p, precheck=False)["rank"]
            vals = {"rank": r}
        want = EXPECTED_RANK.get((spec.series, spec.N))
        vals["expected"] = want
        ok = want is None or r == want
        return ok, None if ok else f"rank {r}, expected {want}", vals

    def kernel():
        p = pi()
        r = W.pi_rank(p, precheck=False)["rank"]
        deficit = p.algebra.dim - r
        if deficit == 0:
            raise _Skip("pi is injective")
        if deficit > 1:
            return True, None, {"kernel_dim": deficit}
        rel = W.kernel_relation(p)
        return True, None, {"kernel_dim": 1, "relation": {W.DISPLAY[k]: str(v) for k, v in rel.items()}}

    def printed():
        if (spec.series, spec.N) != ("Sp", 4):
            raise _Skip("a printed relation exists only for Sp_q(4)")
        rel = W.kernel_relation(pi())
        rows = W.compare_with_printed(rel, spec)
        bad = [r["term"] for r in rows if r["status"] == "mismatch"]
        unread = [r["term"] for r in rows if r["status"] == "unreadable"]
        ok = not bad
        return ok, None if ok else f"terms differ from the printed relation: {', '.join(bad)}", {
            "rows": rows, "mismatched": bad, "unreadable": unread}

    def forms():
        res = W.braid_difference_forms(W.algebra_for(spec))
        ok = res["expanded_equals_corrected_braid_word_form"] and res[
            "corrected_braid_word_form_equals_corrected_skein_form"]
        return ok, None if ok else "corrected braid-word forms disagree", res

    return [
        _Task("bwm.algebra", "three-strand algebra: structure constants", algebra),
        _Task("bwm.pi_multiplicative", "three-strand algebra: representation", multiplicative),
        _Task("bwm.rank", "centralizer rank", rank),
        _Task("bwm.kernel", "centralizer kernel", kernel),
        _Task("bwm.kernel_vs_printed", "printed Sp_q(4) relation", printed),
        _Task("bwm.braid_difference", "braid difference in three-strand words", forms),
    ]


def _functional_tasks(ctx: _Context):
    from .bichar import convolve, make_central_bichar, make_rform, make_sform, Bicharacter
    from .functionals import character_iff_cotriangular, lemma41_check, make_all, prop43_suite
    from .linalg import QMatrix, flip
    spec, N = ctx.spec, ctx.spec.N

    def inverse_pair():
        fs = make_all(make_rform(spec, ctx.z))
        ok = True
        wit = None
        for f, fb in ((fs.f_r, fs.fbar_r), (fs.f_s, fs.fbar_s)):
            if fb.gen_matrix @ f.gen_matrix != QMatrix.identity(N):
                ok, wit = False, f"gen({fb.label}) gen({f.label}) != I"
                break
        return ok, wit, {}

    def lemma():
        return _from_outcome(lemma41_check(make_rform(spec, ctx.z), min(ctx.D, 2), ctx.limit()))

    def suite():
        return _from_outcome(prop43_suite(make_rform(spec, ctx.z), ctx.slice(), ctx.D, ctx.limit()))

    def biconditional():
        r = make_rform(spec, ctx.z)
        cases = [("r", r), ("s", make_sform(spec, ctx.z))]
        for zeta in ctx.zetas:
            cases.append((f"c({zeta})", make_central_bichar(spec, zeta)))
            cases.append((f"c({zeta})*r", convolve(make_central_bichar(spec, zeta), r)))
        P = flip(N)
        cases.append(("R R21", Bicharacter(spec, r.B00 @ P @ r.B00 @ P, "RR21")))
        out = {}
        for name, b in cases:
            o = character_iff_cotriangular(b, min(ctx.D, 2))
            out[name] = {"holds": o.passed, **o.detail}
            if not o.passed:
                return False, f"{name}: {o.witness}", {"cases": out}
        return True, None, {"cases": out}

    def generators():
        fs = make_all(make_rform(spec, ctx.z))
        F = fs.f_r.gen_matrix
        return True, None, {"f_r": _dense(F), "fbar_r": _dense(fs.fbar_r.gen_matrix)}

    return [
        _Task("functionals.generators", "antipode functionals on generators", generators),
        _Task("functionals.inverse_pair", "antipode functionals: inverse pair", inverse_pair),
        _Task("functionals.triple_identity", "antipode functionals: triple identity", lemma),
        _Task("functionals.s4_suite", "antipode functionals: S^4 suite", suite),
        _Task("functionals.character_iff_cotriangular", "antipode functionals: characters", biconditional),
    ]


def _modular_tasks(ctx: _Context):
    from .bichar import make_rform
    from .functionals import make_all, modular_compare
    spec, N = ctx.spec, ctx.spec.N

    def modular():
        # f_r itself scales with z, so it is reported by the functionals suite instead
        o = modular_compare(make_rform(spec, ctx.z))
        ok, wit, vals = _from_outcome(o)
        vals.pop("f_r", None)
        return ok, wit, vals

    def diagonal():
        fs = make_all(make_rform(spec, ctx.z))
        F = fs.f_r.gen_matrix @ fs.f_s.gen_matrix
        ok = F.is_diagonal()
        return ok, None if ok else "F_r has off-diagonal entries", {
            "F_r": [str(F[i, i]) for i in range(N)]}

    return [
        _Task("modular.F_r_diagonal", "F_r on generators", diagonal),
        _Task("modular.orientation", "F_r against the modular matrix", modular),
    ]


def _toy_tasks(ctx: _Context):
    from .ztoy import default_lambdas, toy_character_iff_cotriangular, toy_functionals
    tasks = []
    for lam in default_lambdas():
        tasks.append(_Task(f"toy.functionals[{lam}]", "group algebra of Z", lambda lam=lam: _from_outcome(
            toy_functionals(lam))))
        tasks.append(_Task(f"toy.character_iff_cotriangular[{lam}]", "group algebra of Z",
                           lambda lam=lam: _from_outcome(toy_character_iff_cotriangular(lam))))

    def sigma():
        # lam^2 = 1 leaves sigma undetermined; the others must agree
        sig = {str(lam): toy_functionals(lam).detail.get("sigma") for lam in default_lambdas()}
        vals = {v for v in sig.values() if v is not None}
        ok = len(vals) == 1
        return ok, None if ok else f"sigma per lambda {sig}", {"sigma": sig}

    tasks.append(_Task("toy.global_sigma", "group algebra of Z", sigma))
    return tasks


_BUILDERS = {
    "axioms": _axioms_tasks,
    "yd": _yd_tasks,
    "classify": _classify_tasks,
    "bwm": _bwm_tasks,
    "functionals": _functional_tasks,
    "modular": _modular_tasks,
    "toy": _toy_tasks,
}


def plan(config: RunConfig):
    """The ordered task list for a configuration (raises ConfigError)."""
    if tuple(config.suites) == ("toy",):
        # the toy suite never touches the quantum group
        config.validate()
        return _toy_tasks(None)
    ctx = _make_context(config)
    tasks = []
    for s in SUITES:
        if s in config.suites:
            tasks.extend(_BUILDERS[s](ctx))
    return tasks


def _execute(task: _Task) -> CheckReport:
    from .words import DegreeOverflow, ResourceBound
    start = time.perf_counter()
    try:
        ok, wit, vals = task.fn()
        status = "pass" if ok else "fail"
    except _Skip as exc:
        status, wit, vals = "skipped", None, {"reason": str(exc)}
    except (ResourceBound, DegreeOverflow):
        raise
    except Exception as exc:  # a crashing check is a failing check
        status, wit, vals = "fail", f"{type(exc).__name__}: {exc}", {}
    ms = int((time.perf_counter() - start) * 1000)
    return CheckReport(task.check_id, task.anchor, status, wit, ms, _jsonable(vals))


def run(config: RunConfig):
    """Execute the selected suites; returns CheckReports in plan order."""
    tasks = plan(config)
    threads = config.threads or os.cpu_count() or 1
    if threads == 1:
        return [_execute(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_execute, tasks))


def exit_code(reports) -> int:
    return 1 if any(r.status == "fail" for r in reports) else 0


def serialize(reports, config: RunConfig, timing=False) -> str:
    head = {"schema": SCHEMA, "version": SCHEMA_VERSION, "config": config.as_dict()}
    lines = [json.dumps(head, sort_keys=True, ensure_ascii=False)]
    for r in reports:
        lines.append(json.dumps(r.record(timing), sort_keys=True, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def parse_report(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty report")
    head = json.loads(lines[0])
    if head.get("schema") != SCHEMA:
        raise ValueError(f"not a {SCHEMA} document")
    records = {}
    for ln in lines[1:]:
        rec = json.loads(ln)
        records[rec["check"]] = rec
    return head, records


def report_diff(a: str, b: str, only=None) -> str:
    """Order-independent diff of statuses and values; empty when they agree.

    ``only`` restricts the comparison to check ids starting with one of the
    given prefixes.
    """
    ha, ra = parse_report(a)
    hb, rb = parse_report(b)
    if ha.get("version") != hb.get("version"):
        raise ValueError(f"schema mismatch: {ha.get('version')} vs {hb.get('version')}")

    def keep(k):
        return only is None or any(k.startswith(p) for p in only)

    out = []
    for k in sorted(set(ra) | set(rb)):
        if not keep(k):
            continue
        if k not in rb:
            out.append(f"- {k}")
            continue
        if k not in ra:
            out.append(f"+ {k}")
            continue
        for fld in ("status", "values"):
            x, y = ra[k].get(fld), rb[k].get(fld)
            if x != y:
                out.append(f"~ {k} {fld}: {json.dumps(x, sort_keys=True)} -> {json.dumps(y, sort_keys=True)}")
    return "\n".join(out)
