"""Seeded instance generation, special-case presets and verification campaigns."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import forests, lift, simplicial
from .algebra import (
    GAUSSIAN, GROUP_RING, MATRIX, QUATERNION, RATIONAL, CentralTrace, Gaussian, GroupRingElement,
    MatrixElement, Polynomial, Quaternion, RingDescriptor, RingError, group_ring_evaluate, matrix_ring,
)
from .determinant import SizeCapError
from .graph import SPECIALIZED, SYMBOLIC, SYMMETRIC, GraphInstance, InstanceError
from .report import VerificationReport, compare

THEOREMS = ("mtkz", "sym", "mtkzn", "mttnall", "cw", "cancellation", "positivity", "factorization")
PRESETS = ("kirchhoff", "forman", "chaiken", "zaslavsky", "kenyon")

# (ring, trace) pairs exercised by default
SCALAR_PAIRS = (("rational", "id"), ("gaussian", "id"), ("gaussian", "re"), ("quaternion", "re"), ("group_ring:3", "id"))
LIFT_PAIRS = (("rational", "id"), ("gaussian", "re"), ("quaternion", "re"), ("group_ring:2", "id"))
UNITARY_PAIRS = (("rational", "id"), ("gaussian", "id"), ("quaternion", "re"))

LIFT_GRID = ((2, 2), (2, 3), (3, 2), (3, 3), (4, 2))
CW_GRID = ((4, 2), (5, 2))


# ---------------------------------------------------------------------------
# random elements


def _small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice((1, 2, 3, 1, 2)), rng.choice((1, 2, 3, 5)))


def random_unit(ring: RingDescriptor, rng: random.Random):
    """Exactly norm-one (unitary) element with rational coordinates.

    Gaussians and quaternions use ``z^2 / |z|^2``; matrices are a diagonal of
    such units times a product of rational Givens rotations
    ``c = (1-t^2)/(1+t^2)``, ``s = 2t/(1+t^2)``.
    """
    if ring.kind == RATIONAL:
        return Fraction(rng.choice((1, -1)))
    if ring.kind == GAUSSIAN:
        while True:
            z = Gaussian(rng.randint(-3, 3), rng.randint(-3, 3))
            if z.norm():
                return z * z * (1 / z.norm())
    if ring.kind == QUATERNION:
        while True:
            p = Quaternion(*(rng.randint(-3, 3) for _ in range(4)))
            if p.norm():
                return p * p * (1 / p.norm())
    if ring.kind == GROUP_RING:
        return GroupRingElement.monomial(ring.k, rng.randrange(ring.k))
    N, base = ring.N, ring.base
    zero = base.zero
    U = MatrixElement(tuple(tuple(random_unit(base, rng) if i == j else zero for j in range(N)) for i in range(N)))
    if base.kind == GROUP_RING:
        # signed permutation matrices keep entries in Z[Z/k]
        perm = list(range(N))
        rng.shuffle(perm)
        P = MatrixElement(tuple(tuple(base.one if perm[i] == j else zero for j in range(N)) for i in range(N)))
        return U * P
    for _ in range(N):
        if N < 2:
            break
        a, b = rng.sample(range(N), 2)
        t = _small_rational(rng)
        c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        rows = [[base.one if i == j else zero for j in range(N)] for i in range(N)]
        rows[a][a], rows[a][b] = base.coerce(c), base.coerce(-s)
        rows[b][a], rows[b][b] = base.coerce(s), base.coerce(c)
        U = U * MatrixElement(tuple(tuple(r) for r in rows))
    return U


def random_holonomy(ring: RingDescriptor, rng: random.Random):
    if ring.kind == GROUP_RING:
        return GroupRingElement.monomial(ring.k, rng.randrange(ring.k), rng.choice((1, 1, -1)))
    if ring.kind == MATRIX and ring.base.kind == GROUP_RING:
        N = ring.N
        return MatrixElement(tuple(tuple(random_holonomy(ring.base, rng) if rng.random() < 0.6 else ring.base.zero
                                         for _ in range(N)) for _ in range(N)))
    return ring.random_element(rng, size=2, denominators=(1, 2))


# ---------------------------------------------------------------------------
# instances


def generate_random_instance(seed, n: int, m: int, ring: str | RingDescriptor = "rational", *, trace: str = "id",
                             N: int = 0, unitary: bool = False, symmetric: bool = False,
                             weight_mode: str = SYMBOLIC, block: int = 0) -> GraphInstance:
    """Deterministic random instance.

    ``N > 0`` makes holonomies ``N x N`` matrices over ``ring``.
    ``symmetric`` sets ``h_ji = conj(h_ij)``; ``unitary`` draws norm-one
    holonomies; ``block = p`` makes every matrix block diagonal with blocks
    of size ``p`` and ``N - p``.
    """
    rng = random.Random(f"mtt:{seed}")
    H = RingDescriptor.parse(ring) if isinstance(ring, str) else ring
    R = matrix_ring(N, H) if N else H
    draw = random_unit if unitary else random_holonomy

    def element():
        if block and N:
            A = draw(matrix_ring(block, H), rng)
            B = draw(matrix_ring(N - block, H), rng)
            from .algebra import block_diag

            return block_diag(A, B, H.zero)
        return draw(R, rng)

    hol = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or (symmetric and (j, i) in hol):
                continue
            hol[(i, j)] = element()
            if symmetric:
                hol[(j, i)] = hol[(i, j)].conj() if not isinstance(hol[(i, j)], Fraction) else hol[(i, j)]
    weights = {}
    if weight_mode == SPECIALIZED:
        K = CentralTrace(H, trace).target
        weights = {e: K.coerce(Fraction(rng.randint(1, 3))) for e in hol}
    return GraphInstance(n, m, R, CentralTrace(H, trace), hol, weight_mode, weights)


def preset_instance(preset: str, seed, n: int, m: int, N: int = 0) -> GraphInstance:
    """One flag per classical special case."""
    name, _, arg = preset.partition(":")
    if name == "kirchhoff":
        R = matrix_ring(N, RingDescriptor.parse("rational")) if N else RingDescriptor.parse("rational")
        return GraphInstance(n, m, R, CentralTrace(R.base if N else R, "id"))
    if name == "forman":
        return generate_random_instance(seed, n, m, "gaussian", trace="id", N=N)
    if name == "chaiken":
        k = int(arg or 3)
        return generate_random_instance(seed, n, m, f"group_ring:{k}", trace="id", N=N)
    if name == "zaslavsky":
        rng = random.Random(f"mtt:zaslavsky:{seed}")
        R = RingDescriptor.parse("group_ring:2")
        hol = {(i, j): GroupRingElement.monomial(2, rng.randrange(2))
               for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
        return GraphInstance(n, m, R, CentralTrace(R, "id"), hol)
    if name == "kenyon":
        return generate_random_instance(seed, n, m, "quaternion", trace="re", N=N, unitary=True, symmetric=True,
                                        weight_mode=SYMMETRIC)
    raise InstanceError(f"unknown preset {preset!r}")


def zaslavsky_report(inst: GraphInstance) -> VerificationReport:
    """Signed-graph specialisation g -> -1 of both sides."""
    rep = forests.verify_mtkz(inst)
    lhs = group_ring_evaluate(forests.lhs_mtkz(inst), -1)
    signed = {e: Fraction(-1 if x.coeffs[1] else 1) for e, x in inst.holonomies.items()}
    R = RingDescriptor.parse("rational")
    direct = GraphInstance(inst.n, inst.m, R, CentralTrace(R, "id"), signed, inst.weight_mode)
    rhs = forests.rhs_mtkz(direct)
    out = compare("mtkz:zaslavsky", inst.digest(), lhs, rhs, params=rep.params)
    if not rep.equal:
        return rep
    return out


# ---------------------------------------------------------------------------
# campaigns


@dataclass
class CampaignConfig:
    theorem: str
    instance: object = None          # GraphInstance / ComplexInstance from a file, or None for random
    seed: int = 0
    n: int | None = None
    m: int | None = None
    N: int | None = None
    ring: str | None = None
    trace: str | None = None
    preset: str | None = None
    trials: int = 1
    det_cap: int | None = None
    enum_cap: int | None = None
    force: bool = False
    workers: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise InstanceError(f"unknown theorem {self.theorem!r}; choose from {', '.join(THEOREMS)}")
        if self.trials < 1:
            raise InstanceError("trials must be positive")
        for cap in (self.det_cap, self.enum_cap):
            if cap is not None and cap < 1:
                raise InstanceError("caps must be positive")


def _pairs(cfg: CampaignConfig, default):
    if cfg.ring:
        tr = cfg.trace or ("re" if cfg.ring in ("quaternion",) else "id")
        return ((cfg.ring, tr),)
    return default


def _ms(cfg: CampaignConfig, n: int):
    return [cfg.m] if cfg.m else list(range(1, n + 1))


def _item_seed(cfg: CampaignConfig, *parts) -> str:
    return ":".join(str(p) for p in (cfg.seed, cfg.theorem) + parts)


def plan(cfg: CampaignConfig) -> list:
    """Expand a configuration into ``(label, thunk)`` items, in a fixed order."""
    th = cfg.theorem
    items = []
    w = cfg.workers
    if cfg.instance is not None:
        return _file_items(cfg)

    if th in ("mtkz", "sym"):
        ns = [cfg.n] if cfg.n else (list(range(2, 6)) if th == "mtkz" else list(range(2, 5)))
        mode = SYMMETRIC if th == "sym" else SYMBOLIC
        if cfg.preset:
            for n in ns:
                for m in _ms(cfg, n):
                    for t in range(cfg.trials):
                        inst = preset_instance(cfg.preset, _item_seed(cfg, cfg.preset, n, m, t), n, m)
                        if th == "sym" and inst.weight_mode != SYMMETRIC:
                            inst = inst.with_(weight_mode=SYMMETRIC)
                        if cfg.preset.startswith("zaslavsky") and th == "mtkz":
                            items.append(lambda inst=inst: zaslavsky_report(inst))
                        else:
                            fn = forests.verify_mtkz if th == "mtkz" else forests.verify_sym
                            items.append(lambda inst=inst, fn=fn: fn(inst, workers=w, force=cfg.force))
            return items
        for ring, tr in _pairs(cfg, SCALAR_PAIRS):
            for n in ns:
                for m in _ms(cfg, n):
                    for t in range(cfg.trials):
                        inst = generate_random_instance(_item_seed(cfg, ring, tr, n, m, t), n, m, ring, trace=tr,
                                                        weight_mode=mode)
                        fn = forests.verify_mtkz if th == "mtkz" else forests.verify_sym
                        items.append(lambda inst=inst, fn=fn: fn(inst, workers=w, force=cfg.force))
        return items

    if th in ("mtkzn", "mttnall", "cancellation", "positivity", "factorization"):
        grid = [(cfg.n, cfg.N or 2)] if cfg.n else list(LIFT_GRID)
        if th in ("cancellation", "positivity"):
            default_pairs = UNITARY_PAIRS
        elif th == "mttnall" and not cfg.ring:
            default_pairs = tuple(p for p in LIFT_PAIRS if not p[0].startswith("group_ring"))
        else:
            default_pairs = LIFT_PAIRS
        for ring, tr in _pairs(cfg, default_pairs):
            for n, N in grid:
                if th == "factorization" and N < 2:
                    continue
                for m in _ms(cfg, n):
                    if N * m > (cfg.det_cap or 10) and th in ("mtkzn", "factorization") and not cfg.force:
                        continue
                    for t in range(cfg.trials):
                        s = _item_seed(cfg, ring, tr, n, N, m, t)
                        items.append(_lift_item(th, s, n, m, N, ring, tr, cfg))
        return items

    if th == "cw":
        grid = [(cfg.n, cfg.N or 2)] if cfg.n else list(CW_GRID)
        for v, d in grid:
            cx = simplicial.SimplicialComplex(v, d)
            ms = [cfg.m] if cfg.m else list(range(1, cw_feasible_m(v, d, cfg) + 1))
            for ring, tr in _pairs(cfg, (("rational", "id"), ("gaussian", "re"), ("quaternion", "re"))):
                for m in ms:
                    for t in range(cfg.trials):
                        s = _item_seed(cfg, ring, tr, v, d, m, t)
                        items.append(_cw_item(cx, m, ring, tr, s, cfg))
        if not cfg.n:
            items.append(lambda: kalai_report(6, 2))
        return items
    raise InstanceError(f"unknown theorem {th!r}")


def cw_weight_mode(v: int, d: int) -> str:
    """Symbolic weights where the polynomial stays small, one weight per d-cell beyond."""
    return SYMBOLIC if v <= 4 else simplicial.CELLULAR


def cw_feasible_m(v: int, d: int, cfg: CampaignConfig | None = None) -> int:
    cx = simplicial.SimplicialComplex(v, d)
    cap = (cfg.enum_cap if cfg and cfg.enum_cap else CW_ENUM_CAP)
    det_cap = (cfg.det_cap if cfg and cfg.det_cap else 10)
    deg = len(cx.adjacent[cx.cells[0]])
    m = 0
    while m < len(cx.cells) and deg ** (m + 1) <= cap and m + 1 <= det_cap:
        m += 1
    return m


CW_ENUM_CAP = 300_000


def _lift_item(th, seed, n, m, N, ring, tr, cfg):
    w = cfg.workers

    def run():
        H = RingDescriptor.parse(ring)
        if th in ("cancellation", "positivity"):
            inst = generate_random_instance(seed, n, m, H, trace=tr, N=N, unitary=True, symmetric=True,
                                            weight_mode=SYMMETRIC)
            L = lift.LiftedInstance(inst)
            return (lift.verify_cancellation if th == "cancellation" else lift.verify_positivity)(L, workers=w)
        if th == "factorization":
            inst = generate_random_instance(seed, n, m, H, trace=tr, N=N, block=1)
            return lift.verify_factorization(inst, 1, workers=w, force=cfg.force)
        inst = generate_random_instance(seed, n, m, H, trace=tr, N=N)
        if cfg.preset:
            inst = preset_instance(cfg.preset, seed, n, m, N)
        L = lift.LiftedInstance(inst)
        if th == "mtkzn":
            return lift.verify_mtkzn(L, workers=w, force=cfg.force)
        return lift.verify_mttnall(L, workers=w)

    return run


def _cw_item(cx, m, ring, tr, seed, cfg):
    def run():
        rng = random.Random(f"mtt:{seed}")
        H = RingDescriptor.parse(ring)
        h = {p: random_holonomy(H, rng) for p in cx.pairs()}
        ci = simplicial.ComplexInstance(cx, m, H, CentralTrace(H, tr), h, cw_weight_mode(cx.v, cx.d))
        return simplicial.verify_cw(ci, workers=cfg.workers, force=cfg.force)

    return run


def kalai_report(v: int, d: int) -> VerificationReport:
    """Elimination-only minor (well = cells through vertex v) against v^C(v-2, d)."""
    R = RingDescriptor.parse("rational")
    lhs = Polynomial.constant(R, simplicial.unit_minor(v, d))
    rhs = Polynomial.constant(R, simplicial.kalai_count(v, d))
    return compare("cw:kalai", f"v{v}d{d}", lhs, rhs, params={"v": v, "d": d})


def _file_items(cfg: CampaignConfig) -> list:
    inst = cfg.instance
    th = cfg.theorem
    w = cfg.workers
    if isinstance(inst, simplicial.ComplexInstance):
        if th != "cw":
            raise InstanceError(f"a simplicial instance only supports theorem cw, not {th}")
        return [lambda: simplicial.verify_cw(inst, workers=w, force=cfg.force)]
    if th == "cw":
        raise InstanceError("theorem cw needs a simplicial instance")
    if th in ("mtkz", "sym"):
        if inst.ring.kind == MATRIX:
            raise InstanceError(f"theorem {th} needs scalar holonomies; use mtkzn for matrices")
        fn = forests.verify_mtkz if th == "mtkz" else forests.verify_sym
        return [lambda: fn(inst, workers=w, force=cfg.force)]
    L = lift.LiftedInstance(lift.as_matrix_instance(inst))
    if th == "mtkzn":
        return [lambda: lift.verify_mtkzn(L, workers=w, force=cfg.force)]
    if th == "mttnall":
        if not L.base.target.contains_rationals:
            raise lift.PreconditionError(f"mttnall needs 1/N in {L.base.target}")
        return [lambda: lift.verify_mttnall(L, workers=w)]
    if th == "cancellation":
        return [lambda: lift.verify_cancellation(L, workers=w)]
    if th == "positivity":
        return [lambda: lift.verify_positivity(L, workers=w)]
    p = cfg.params.get("block", 1)
    return [lambda: lift.verify_factorization(L.base, p, workers=w, force=cfg.force)]


INPUT_ERRORS = (InstanceError, RingError, SizeCapError, forests.EnumerationCapError, lift.PreconditionError, ValueError)


def run_campaign(cfg: CampaignConfig) -> tuple:
    """Run every planned check; returns ``(reports, exit_status)``.

    Exit status 0 when everything verified (or was legitimately skipped),
    1 on any failed identity, 2 on configuration or input errors.
    """
    import os

    from .determinant import CAP_ENV

    old = os.environ.get(CAP_ENV)
    if cfg.det_cap is not None:
        os.environ[CAP_ENV] = str(cfg.det_cap)
    try:
        if cfg.theorem == "mttnall" and cfg.ring and not RingDescriptor.parse(cfg.ring).contains_rationals:
            raise lift.PreconditionError(f"mttnall needs 1/N; {cfg.ring} has integer coefficients")
        items = plan(cfg)
        if cfg.workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                reports = list(pool.map(lambda f: f(), items))
        else:
            reports = [f() for f in items]
    except INPUT_ERRORS as exc:
        return [], 2, str(exc)
    finally:
        if cfg.det_cap is not None:
            if old is None:
                os.environ.pop(CAP_ENV, None)
            else:
                os.environ[CAP_ENV] = old
    status = 0 if all(r.ok for r in reports) else 1
    return reports, status, ""


def default_campaign(seed: int = 0, workers: int = 1) -> list:
    """Every theorem on its built-in grid."""
    out = []
    for th in THEOREMS:
        reports, status, err = run_campaign(CampaignConfig(th, seed=seed, workers=workers))
        out.append((th, reports, status, err))
    return out


def with_seed(cfg: CampaignConfig, seed: int) -> CampaignConfig:
    return replace(cfg, seed=seed)
