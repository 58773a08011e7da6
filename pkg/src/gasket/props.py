"""
Property suites: seeded, sample-based acceptance checks over the whole package.

Each suite returns `CheckResult`s; `run_props` collects them into a
versioned `PropsReport`. With ``strict=True`` every failed check is raised at
once as an `ExceptionGroup` of `PropertyViolation`.
"""
import itertools
import math
from typing import Callable, Dict, List, Optional, Union

import structlog
from exceptiongroup import ExceptionGroup

from gasket.addresses import (
    Address,
    canonicalize,
    enumerate_level,
    equivalent,
    glued_partner,
    pad,
    prepend,
)
from gasket.coalgebras import (
    cantor_coalgebra,
    cantor_space,
    address_coalgebra,
    corner_coalgebra,
    gasket_coalgebra,
    trivial_coalgebra,
)
from gasket.completion import (
    AddressStream,
    canonical_tail,
    corner_stream,
    psi,
    random_stream,
    s_structure,
    stream_distance,
    streams_equal,
    tensor_stream_distance,
    truncate,
)
from gasket.euclidean import (
    Point2,
    address_to_point,
    distortion_report,
    euclidean_distance,
    gasket_space,
    ifs_map,
    tau_algebra,
)
from gasket.exceptions import PropertyViolation
from gasket.metrics import Dyadic, address_distance, common_prefix_bound, distance_table
from gasket.oracle import oracle_distance
from gasket.sampling import get_rng, random_address, random_address_pairs, random_word
from gasket.settings import get_settings
from gasket.spaces import (
    PointedMap,
    TripointedSpace,
    check_regularity,
    corner_space,
    discrete_address_space,
    discrete_space,
    prepend_algebra,
    structure_map,
    tensor_map,
    tensor_space,
)
from gasket.types.main import CORNERS, LETTERS, RegularityKind, Suite
from gasket.types.reports import CheckResult, PropsReport, SuiteResult
from gasket.universal_maps import (
    blowup_experiment,
    check_short_preservation,
    check_square,
    constant_morphism,
    final_morphism,
    initial_morphism,
    theta,
)

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = ["run_suite", "run_props", "SUITES"]

EXHAUSTIVE_LEVEL = 4
ISOMETRY_EXHAUSTIVE_LEVEL = 5


def _result(name: str, witnesses: List[str], **details) -> CheckResult:
    return CheckResult(
        name=name,
        passed=not witnesses,
        details=details,
        witnesses=witnesses[: settings.MAX_WITNESSES],
    )


class SuiteContext:
    """What every check needs: the generator, the sample budget and the tolerance."""

    def __init__(self, seed: int, samples: int, tol: float):
        self.seed = seed
        self.samples = samples
        self.tol = tol
        self.rng = get_rng(seed)

    def scaled(self, factor: float, minimum: int = 1) -> int:
        return max(minimum, int(self.samples * factor))


# --- metric ---
def check_oracle_exhaustive(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    num_pairs = 0
    for level in range(EXHAUSTIVE_LEVEL + 1):
        addresses = enumerate_level(level)
        for x, y in itertools.combinations_with_replacement(addresses, 2):
            num_pairs += 1
            exact, brute = address_distance(x, y), oracle_distance(x, y)
            if exact != brute:
                witnesses.append(f"d({x}, {y}) = {exact} but the oracle gives {brute}")
    return _result("oracle_exhaustive", witnesses, pairs=num_pairs, max_level=EXHAUSTIVE_LEVEL)


def check_oracle_random(ctx: SuiteContext, per_source: int = 100) -> CheckResult:
    """Seeded pairs at levels 5..ORACLE_MAX_LEVEL, grouped by source to reuse each Dijkstra run."""
    witnesses = []
    levels = list(range(EXHAUSTIVE_LEVEL + 1, settings.ORACLE_MAX_LEVEL + 1))
    total = ctx.scaled(10)
    num_pairs = 0
    for level in levels:
        remaining = total // max(1, len(levels))
        while remaining > 0:
            x = random_address(ctx.rng, level)
            for _ in range(min(per_source, remaining)):
                y = random_address(ctx.rng, level)
                num_pairs += 1
                exact, brute = address_distance(x, y), oracle_distance(x, y)
                if exact != brute:
                    witnesses.append(f"d({x}, {y}) = {exact} but the oracle gives {brute}")
            remaining -= per_source
    return _result("oracle_random", witnesses, pairs=num_pairs, levels=levels)


def check_metric_axioms(ctx: SuiteContext) -> CheckResult:
    level = min(3, settings.DISTANCE_TABLE_MAX_LEVEL)
    violations = distance_table(level).check_axioms()
    triples = 0
    for _ in range(ctx.samples):
        x, y, z = (random_address(ctx.rng) for _ in range(3))
        triples += 1
        if address_distance(x, z) > address_distance(x, y) + address_distance(y, z):
            violations.append(f"triangle: {x}, {y}, {z}")
    return _result("metric_axioms", violations, table_level=level, random_triples=triples)


def check_prepend_isometry(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    pairs = [
        (x, y)
        for level in range(ISOMETRY_EXHAUSTIVE_LEVEL + 1)
        for x, y in itertools.combinations(enumerate_level(level), 2)
    ]
    pairs += random_address_pairs(ctx.rng, ctx.samples, min_level=6, max_level=6)
    for x, y in pairs:
        half = address_distance(x, y).half()
        for m in LETTERS:
            scaled = address_distance(prepend(m, x), prepend(m, y))
            if scaled != half:
                witnesses.append(f"d({m}{x}, {m}{y}) = {scaled}, expected {half}")
    return _result("prepend_isometry", witnesses, pairs=len(pairs))


def check_prefix_bound(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    pairs = random_address_pairs(ctx.rng, ctx.samples)
    for x, y in pairs:
        if address_distance(x, y) > common_prefix_bound(x, y):
            witnesses.append(f"d({x}, {y}) exceeds the common-prefix bound")
    return _result("common_prefix_bound", witnesses, pairs=len(pairs))


def check_metric_constants(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    expected = {
        "|FI|": (len(enumerate_level(1)), 6),
        "|F²I|": (len(enumerate_level(2)), 15),
        "d(a:T, b:L)": (address_distance(Address.of("a", "T"), Address.of("b", "L")), 1),
        "d(a:T, a:L)": (address_distance(Address.of("a", "T"), Address.of("a", "L")), 0.5),
        "d(b:L, a:R)": (address_distance(Address.of("b", "L"), Address.of("a", "R")), 1),
        "d(aa:L, aa:R)": (address_distance(Address.of("aa", "L"), Address.of("aa", "R")), 0.25),
    }
    for name, (actual, wanted) in expected.items():
        if actual != wanted:
            witnesses.append(f"{name} = {actual}, expected {wanted}")
    return _result("constants", witnesses)


def _raw_address(ctx: SuiteContext, level: Optional[int] = None) -> Address:
    """A raw, possibly non-canonical, address."""
    if level is None:
        level = int(ctx.rng.integers(0, settings.SAMPLE_MAX_LEVEL + 1))
    return Address(random_word(ctx.rng, level), CORNERS[int(ctx.rng.integers(0, 3))])


def _same_point(x: Address) -> List[Address]:
    """Raw names of the point `x`: itself, its canonical form, a padding and its partner."""
    names = [x, canonicalize(x), pad(x, x.level + 2)]
    partner = glued_partner(x)
    if partner is not None:
        names.append(partner)
    return names


def check_canonical_idempotent(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    for _ in range(ctx.samples):
        raw = _raw_address(ctx)
        once = canonicalize(raw)
        if canonicalize(once) != once:
            witnesses.append(f"canonicalize is not idempotent on {raw}")
        if not equivalent(raw, once):
            witnesses.append(f"{raw} and its canonical form {once} are not equivalent")
    return _result("canonical_idempotent", witnesses, max_level=settings.SAMPLE_MAX_LEVEL)


def check_equivalence_relation(ctx: SuiteContext) -> CheckResult:
    """Reflexive, symmetric and transitive on the raw names of sampled points plus a stranger."""
    witnesses = []
    points = ctx.scaled(0.2, minimum=10)
    for _ in range(points):
        names = _same_point(_raw_address(ctx))
        for x, y in itertools.combinations(names, 2):
            if not equivalent(x, y):
                witnesses.append(f"{x} and {y} name one point but are not equivalent")
        pool = names + [_raw_address(ctx)]
        related = {(x, y): equivalent(x, y) for x in pool for y in pool}
        for x in pool:
            if not related[(x, x)]:
                witnesses.append(f"not reflexive at {x}")
        for x, y in itertools.permutations(pool, 2):
            if related[(x, y)] != related[(y, x)]:
                witnesses.append(f"not symmetric at {x}, {y}")
        for x, y, z in itertools.permutations(pool, 3):
            if related[(x, y)] and related[(y, z)] and not related[(x, z)]:
                witnesses.append(f"not transitive at {x}, {y}, {z}")
    return _result("equivalence_relation", witnesses, points=points)


def check_prepend_respects_equivalence(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    points = ctx.scaled(0.2, minimum=10)
    for _ in range(points):
        names = _same_point(_raw_address(ctx))
        for x, y in itertools.combinations(names, 2):
            for m in LETTERS:
                if not equivalent(prepend(m, x), prepend(m, y)):
                    witnesses.append(f"{x} ~ {y} but {m}{x} and {m}{y} differ")
    return _result("prepend_respects_equivalence", witnesses, points=points)


def check_tensor_prefix_stability(ctx: SuiteContext, max_prefix: int = 6) -> CheckResult:
    """
    x, x' and y, y' sharing n-letter prefixes: |d(m x, m y) - d(m x', m y')| <= 2^(1-n).
    """
    witnesses = []
    for _ in range(ctx.samples):
        n = int(ctx.rng.integers(0, max_prefix + 1))
        level = n + int(ctx.rng.integers(0, 4))
        x, y = random_address(ctx.rng, level), random_address(ctx.rng, level)
        x_near = canonicalize(Address(x.word[:n] + random_word(ctx.rng, level - n), x.corner))
        y_near = canonicalize(Address(y.word[:n] + random_word(ctx.rng, level - n), y.corner))
        bound = Dyadic(1, n) * 2
        for m in LETTERS:
            gap = abs(
                address_distance(prepend(m, x), prepend(m, y))
                - address_distance(prepend(m, x_near), prepend(m, y_near))
            )
            if gap > bound:
                witnesses.append(f"{m}⊗({x}, {y}) vs {m}⊗({x_near}, {y_near}): {gap} > {bound}")
    return _result("tensor_prefix_stability", witnesses, max_prefix=max_prefix)


# --- functor ---
def _square_map_on_segment() -> PointedMap:
    space = cantor_space()

    def square(point):
        if point[1] != 0:
            return point
        return Point2(float(point[0]) ** 2, 0.0)

    return PointedMap(function=square, domain=space, codomain=space, name="x^2")


def _stretch_map_on_segment() -> PointedMap:
    space = cantor_space()

    def stretch(point):
        if point[1] != 0:
            return point
        return Point2(min(3 * float(point[0]), 1.0), 0.0)

    return PointedMap(function=stretch, domain=space, codomain=space, name="min(3x, 1)")


def _collapse_map() -> PointedMap:
    space = discrete_space(range(5))
    return PointedMap(
        function=lambda point: point if point in ("T", "L", "R") else "T",
        domain=space,
        codomain=space,
        name="collapse",
    )


def _identity_on_gasket() -> PointedMap:
    space = gasket_space()
    return PointedMap(function=lambda point: point, domain=space, codomain=space, name="id")


TEST_MORPHISMS: Dict[str, tuple] = {
    "collapse": (_collapse_map, RegularityKind.short, None),
    "id": (_identity_on_gasket, RegularityKind.short, None),
    "x^2": (_square_map_on_segment, RegularityKind.lipschitz, 2.0),
    "min(3x, 1)": (_stretch_map_on_segment, RegularityKind.lipschitz, 3.0),
}


def check_tensor_distinguished(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    spaces: List[TripointedSpace] = [corner_space(), gasket_space(), cantor_space()]
    for space in spaces:
        for problem in tensor_space(space).check_distinguished():
            witnesses.append(f"M⊗{space.name}: {problem}")
    return _result("tensor_distinguished", witnesses, spaces=[s.name for s in spaces])


def check_functor_preservation(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    details = {}
    for name, (build, kind, constant) in TEST_MORPHISMS.items():
        f = build()
        for label, g in (("f", f), ("Ff", tensor_map(f))):
            report = check_regularity(g, kind, samples=ctx.samples, constant=constant, rng=ctx.rng)
            details[f"{label} {name}"] = report.max_ratio
            if not report.passed:
                witnesses.append(f"{label} = {g.name} is not {kind} ({report.violations} pairs)")
    return _result("functor_preservation", witnesses, max_ratios=details)


def check_discrete_values(ctx: SuiteContext) -> CheckResult:
    space = tensor_space(discrete_address_space())
    values = set()
    witnesses = []
    for x, y in space.sample_pairs(ctx.rng, ctx.samples):
        value = space.metric(x, y)
        values.add(value)
        if value not in (0.0, 0.5, 1.0):
            witnesses.append(f"d({x}, {y}) = {value}")
    return _result("discrete_values", witnesses, values=sorted(values))


def check_discrete_structure(ctx: SuiteContext) -> CheckResult:
    g = structure_map(prepend_algebra(discrete_address_space()))
    lipschitz = check_regularity(g, RegularityKind.lipschitz, ctx.samples, 2.0, rng=ctx.rng)
    continuous = check_regularity(
        g, RegularityKind.continuous, ctx.samples, epsilons=(0.5,), rng=ctx.rng
    )
    witnesses = []
    if not lipschitz.passed:
        witnesses.append(f"g is not 2-Lipschitz on G_ρ ({lipschitz.violations} pairs)")
    delta = continuous.deltas.get("0.5")
    if delta is None or delta < 0.25:
        witnesses.append(f"g on G_ρ needs delta {delta} < 1/4 for epsilon 1/2")
    return _result(
        "discrete_structure",
        witnesses,
        max_ratio=lipschitz.max_ratio,
        deltas=continuous.deltas,
    )


# --- initiality ---
def check_tau_agrees(ctx: SuiteContext, max_level: int = 8) -> CheckResult:
    phi = initial_morphism(tau_algebra())
    witnesses = []
    count = 0
    for level in range(max_level + 1):
        for addr in enumerate_level(level):
            count += 1
            gap = euclidean_distance(phi(addr), address_to_point(addr))
            if gap > settings.POINT_TOLERANCE:
                witnesses.append(f"φ({addr}) is {gap} away from its IFS image")
    return _result("tau_agrees", witnesses, addresses=count, max_level=max_level)


def check_initial_constants(ctx: SuiteContext) -> CheckResult:
    phi = initial_morphism(tau_algebra())
    expected = {
        ":T": (Address.of("", "T"), (0.5, math.sqrt(3) / 2)),
        "a:R": (Address.of("a", "R"), (0.75, math.sqrt(3) / 4)),
        "b:T": (Address.of("b", "T"), (0.25, math.sqrt(3) / 4)),
    }
    witnesses = []
    for name, (addr, point) in expected.items():
        if euclidean_distance(phi(addr), point) > settings.POINT_TOLERANCE:
            witnesses.append(f"φ({name}) = {phi(addr)}, expected {point}")
    witness_distance = euclidean_distance(
        phi(Address.of("b", "L")), phi(Address.of("a", "R"))
    )
    if abs(witness_distance - math.sqrt(3) / 2) > settings.POINT_TOLERANCE:
        witnesses.append(f"d(τ(b⊗L), τ(a⊗R)) = {witness_distance}, expected √3/2")
    return _result("initial_constants", witnesses, witness_distance=witness_distance)


def check_gluing_respected(ctx: SuiteContext) -> CheckResult:
    """Every raw representation at levels <= 4 evaluates without an ill-defined-algebra error."""
    phi = initial_morphism(tau_algebra(), check_gluing=True)
    g_phi = initial_morphism(prepend_algebra(), check_gluing=False)
    witnesses = []
    for level in range(EXHAUSTIVE_LEVEL + 1):
        for letters in itertools.product(LETTERS, repeat=level):
            for z in CORNERS:
                addr = Address("".join(letters), z)
                try:
                    phi(addr)
                except ValueError as exc:
                    witnesses.append(str(exc))
                # into (G, g) itself φ is the canonical form
                if g_phi(addr) != canonicalize(addr):
                    witnesses.append(f"φ_G({addr}) = {g_phi(addr)}")
    return _result("gluing_respected", witnesses)


# --- finality ---
def _built_ins() -> list:
    return [gasket_coalgebra(), cantor_coalgebra(8)]


def check_theta_cauchy(ctx: SuiteContext, max_depth: int = 14) -> CheckResult:
    witnesses = []
    points = ctx.scaled(0.2, minimum=10)
    for co in _built_ins():
        for _ in range(points):
            x = co.space.sample(ctx.rng)
            thetas = [theta(co, x, n) for n in range(max_depth + 1)]
            for p, q in itertools.combinations(range(1, max_depth + 1), 2):
                bound = 2.0 ** -min(p, q)
                if address_distance(thetas[p], thetas[q]) > bound:
                    witnesses.append(f"{co.name}: d(θ_{p}, θ_{q}) > {bound} at {x}")
    return _result("theta_cauchy", witnesses, points_per_coalgebra=points, max_depth=max_depth)


def check_representative_independence(ctx: SuiteContext, max_depth: int = 14) -> CheckResult:
    witnesses = []
    points = ctx.scaled(0.1, minimum=10)
    for co in _built_ins():
        for _ in range(points):
            x = co.space.sample(ctx.rng)
            for n in range(1, max_depth + 1):
                d = address_distance(theta(co, x, n, "T"), theta(co, x, n, "L"))
                if d > 2.0 ** (1 - n):
                    witnesses.append(f"{co.name}: corner choice moves θ_{n}({x}) by {d}")
    return _result("representative_independence", witnesses, points_per_coalgebra=points)


def check_finality_square(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    details = {}
    samples = ctx.scaled(0.1, minimum=10)
    for co in [gasket_coalgebra(), cantor_coalgebra(4), cantor_coalgebra(8)]:
        report = check_square(co, samples=samples, tol=ctx.tol, rng=ctx.rng)
        details[co.name] = report.max_lower_bound
        if not report.passed:
            witnesses.extend(f"{co.name}: {w.left} ↦ {w.right}" for w in report.witnesses)
    # a constant map to T_S must be caught
    control = check_square(
        cantor_coalgebra(8), samples=samples, tol=ctx.tol, morphism=constant_morphism, rng=ctx.rng
    )
    if control.passed:
        witnesses.append("the constant morphism was not rejected")
    return _result("finality_square", witnesses, max_lower_bounds=details, tol=ctx.tol)


def check_shortness_transfer(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    statuses = {}
    for co in [corner_coalgebra(), trivial_coalgebra(), address_coalgebra()]:
        report = check_short_preservation(co, samples=ctx.samples, tol=ctx.tol, rng=ctx.rng)
        statuses[co.name] = report.status
        if not report.passed:
            witnesses.append(f"{co.name}: {report.status}")
    sigma_witness = (Point2(0.0, 0.0), Point2(0.75, math.sqrt(3) / 4))
    report = check_short_preservation(
        gasket_coalgebra(),
        samples=ctx.scaled(0.1, minimum=10),
        tol=ctx.tol,
        rng=ctx.rng,
        extra_pairs=[sigma_witness],
    )
    statuses["gasket"] = report.status
    if report.status != "precondition unmet":
        witnesses.append("σ was not flagged as expanding (b⊗L, a⊗R)")
    return _result("shortness_transfer", witnesses, statuses=statuses)


def check_blowup(ctx: SuiteContext, depth: int = 10) -> CheckResult:
    witnesses = []
    last_ratios = {}
    for j in (4, 8, 16):
        frame = blowup_experiment(j, depth)
        for row in frame.itertuples():
            expected = (j / 2) ** row.n
            if not row.d_S_lo <= 2.0**-row.n <= row.d_S_hi or row.ratio != expected:
                witnesses.append(f"j={j}, n={row.n}: ratio {row.ratio}, expected {expected}")
        last_ratios[str(j)] = float(frame.ratio.iloc[-1])
    if last_ratios["4"] <= 1000:
        witnesses.append(f"j=4 ratio only reaches {last_ratios['4']} at n={depth}")
    return _result("blowup", witnesses, ratios_at_depth=last_ratios, depth=depth)


# --- completion ---
def check_truncation_cauchy(ctx: SuiteContext, max_depth: int = 20) -> CheckResult:
    witnesses = []
    streams = ctx.scaled(0.05, minimum=10)
    for _ in range(streams):
        p = random_stream(ctx.rng)
        truncations = [truncate(p, n) for n in range(max_depth + 1)]
        for n, m in itertools.combinations(range(max_depth + 1), 2):
            if address_distance(truncations[n], truncations[m]) > 2.0 ** -min(n, m):
                witnesses.append(f"{p}: d(t_{n}, t_{m}) too large")
    return _result("truncation_cauchy", witnesses, streams=streams, max_depth=max_depth)


def check_distinguished_streams(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    streams = [corner_stream(z) for z in CORNERS]
    for p, q in itertools.combinations(streams, 2):
        approx = stream_distance(p, q, ctx.tol)
        if not approx.contains(1.0):
            witnesses.append(f"d({p}, {q}) = {approx}")
    return _result("distinguished_streams", witnesses)


def check_interval_nesting(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    for _ in range(ctx.scaled(0.1, minimum=10)):
        p, q = random_stream(ctx.rng), random_stream(ctx.rng)
        coarse = stream_distance(p, q, ctx.tol)
        fine = stream_distance(p, q, ctx.tol / 64)
        if not coarse.overlaps(fine):
            witnesses.append(f"d({p}, {q}): {fine} escapes {coarse}")
    return _result("interval_nesting", witnesses)


def check_s_isometry(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    for _ in range(ctx.scaled(0.1, minimum=10)):
        p, q = random_stream(ctx.rng), random_stream(ctx.rng)
        (m1, p1), (m2, q1) = s_structure(p), s_structure(q)
        before = stream_distance(p, q, ctx.tol)
        after = tensor_stream_distance(m1, p1, m2, q1, ctx.tol)
        if not before.overlaps(after):
            witnesses.append(f"d({p}, {q}) = {before} but d(s p, s q) = {after}")
    return _result("s_isometry", witnesses)


def check_psi_round_trip(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    for _ in range(ctx.scaled(0.1, minimum=10)):
        p = random_stream(ctx.rng)
        back = psi(*s_structure(p))
        if not stream_distance(p, back, ctx.tol).contains(0.0):
            witnesses.append(f"ψ(s({p})) = {back}")
        if p.descriptor is not None and not streams_equal(p, back):
            witnesses.append(f"ψ(s({p})) = {back} is a different point")
    return _result("psi_round_trip", witnesses)


def check_canonical_tails(ctx: SuiteContext) -> CheckResult:
    expected = {
        ("b", "a"): ("a", "b"),
        ("", "a"): ("", "a"),
        ("abc", "b"): ("abb", "c"),
        ("c", "a"): ("a", "c"),
        ("c", "b"): ("b", "c"),
    }
    witnesses = []
    for descriptor, wanted in expected.items():
        actual = canonical_tail(descriptor)
        if actual != wanted:
            witnesses.append(f"canonical_tail{descriptor} = {actual}, expected {wanted}")
        dual = AddressStream.periodic(*descriptor)
        if not stream_distance(dual, AddressStream.periodic(*wanted), ctx.tol).contains(0.0):
            witnesses.append(f"{descriptor} and {wanted} are not the same point")
    return _result("canonical_tails", witnesses)


# --- euclid ---
def check_round_trip(ctx: SuiteContext, depth: int = 12) -> CheckResult:
    co = gasket_coalgebra()
    witnesses = []
    points = ctx.scaled(0.5, minimum=10)
    worst = 0.0
    for _ in range(points):
        p = co.space.sample(ctx.rng)
        q = address_to_point(truncate(final_morphism(co, p), depth))
        gap = euclidean_distance(p, q)
        worst = max(worst, gap)
        if gap > 2.0**-depth + settings.POINT_TOLERANCE:
            witnesses.append(f"{p} comes back as {q}")
    return _result("round_trip", witnesses, points=points, worst=worst, depth=depth)


def check_glued_coincidence(ctx: SuiteContext, max_level: int = 6) -> CheckResult:
    witnesses = []
    pairs = 0
    for level in range(max_level + 1):
        for addr in enumerate_level(level):
            partner = glued_partner(addr)
            if partner is None:
                continue
            pairs += 1
            gap = euclidean_distance(address_to_point(addr), address_to_point(partner))
            if gap > settings.POINT_TOLERANCE:
                witnesses.append(f"{addr} and {partner} land {gap} apart")
    return _result("glued_coincidence", witnesses, pairs=pairs)


def check_embedding_short(ctx: SuiteContext) -> CheckResult:
    witnesses = []
    pairs = [
        pair
        for level in range(3 + 1)
        for pair in itertools.combinations(enumerate_level(level), 2)
    ]
    pairs += random_address_pairs(ctx.rng, ctx.samples, min_level=6, max_level=6)
    for x, y in pairs:
        euclid = euclidean_distance(address_to_point(x), address_to_point(y))
        if euclid > float(address_distance(x, y)) + settings.POINT_TOLERANCE:
            witnesses.append(f"|{x} - {y}| exceeds d_G")
    tau = check_regularity(
        structure_map(tau_algebra()), RegularityKind.short, ctx.samples, rng=ctx.rng
    )
    if not tau.passed:
        witnesses.append(f"τ is not short ({tau.violations} pairs)")
    return _result("embedding_short", witnesses, pairs=len(pairs), tau_max_ratio=tau.max_ratio)


def check_distortion(ctx: SuiteContext) -> CheckResult:
    report = distortion_report(samples=ctx.samples, depth=6, rng=ctx.rng)
    witnesses = []
    if report.max_ratio > 1 + settings.POINT_TOLERANCE:
        witnesses.append(f"Euclidean distance exceeds d_G by a factor {report.max_ratio}")
    if abs(report.witness_ratio - math.sqrt(3) / 2) > settings.POINT_TOLERANCE:
        witnesses.append(f"(b⊗L, a⊗R) ratio {report.witness_ratio}, expected √3/2")
    return _result(
        "distortion",
        witnesses,
        min_ratio=report.min_ratio,
        max_ratio=report.max_ratio,
        witness_ratio=report.witness_ratio,
    )


def check_distortion_floor(ctx: SuiteContext, depth: int = 6) -> CheckResult:
    """Euclidean distance never drops below half of d_G, over every pair at `depth`."""
    addresses = enumerate_level(depth)
    points = [address_to_point(addr) for addr in addresses]
    min_ratio = math.inf
    arg_min = None
    for i, j in itertools.combinations(range(len(addresses)), 2):
        colimit = float(address_distance(addresses[i], addresses[j]))
        ratio = euclidean_distance(points[i], points[j]) / colimit
        if ratio < min_ratio:
            min_ratio, arg_min = ratio, (addresses[i], addresses[j])
    witnesses = []
    if min_ratio < 0.5 - settings.POINT_TOLERANCE:
        witnesses.append(f"({arg_min[0]}, {arg_min[1]}) has ratio {min_ratio} < 1/2")
    return _result("distortion_floor", witnesses, depth=depth, min_ratio=min_ratio)


def _rounded(points) -> set:
    return {(round(p[0], 9), round(p[1], 9)) for p in points}


def check_self_similarity(ctx: SuiteContext, max_depth: int = 4) -> CheckResult:
    witnesses = []
    for depth in range(max_depth):
        coarse = [address_to_point(a) for a in enumerate_level(depth)]
        fine = _rounded(address_to_point(a) for a in enumerate_level(depth + 1))
        images = _rounded(ifs_map(m)(p) for m in LETTERS for p in coarse)
        if fine != images:
            witnesses.append(f"level {depth + 1} is not the union of σ_m(level {depth})")
    return _result("self_similarity", witnesses, max_depth=max_depth)


SUITES: Dict[Suite, List[Callable[[SuiteContext], CheckResult]]] = {
    Suite.metric: [
        check_metric_constants,
        check_canonical_idempotent,
        check_equivalence_relation,
        check_prepend_respects_equivalence,
        check_oracle_exhaustive,
        check_oracle_random,
        check_metric_axioms,
        check_prepend_isometry,
        check_prefix_bound,
        check_tensor_prefix_stability,
    ],
    Suite.functor: [
        check_tensor_distinguished,
        check_functor_preservation,
        check_discrete_values,
        check_discrete_structure,
    ],
    Suite.initiality: [
        check_initial_constants,
        check_tau_agrees,
        check_gluing_respected,
    ],
    Suite.finality: [
        check_theta_cauchy,
        check_representative_independence,
        check_finality_square,
        check_shortness_transfer,
        check_blowup,
    ],
    Suite.completion: [
        check_distinguished_streams,
        check_truncation_cauchy,
        check_interval_nesting,
        check_s_isometry,
        check_psi_round_trip,
        check_canonical_tails,
    ],
    Suite.euclid: [
        check_round_trip,
        check_glued_coincidence,
        check_embedding_short,
        check_distortion,
        check_distortion_floor,
        check_self_similarity,
    ],
}


def run_suite(
    suite: Union[Suite, str],
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    tol: Optional[float] = None,
) -> SuiteResult:
    suite = Suite(str(suite))
    if suite == Suite.all:
        raise ValueError("run_suite takes a single suite; use run_props for `all`")
    ctx = SuiteContext(
        seed=settings.RANDOM_STATE if seed is None else seed,
        samples=settings.NUM_SAMPLES if samples is None else samples,
        tol=settings.DEFAULT_TOLERANCE if tol is None else tol,
    )
    result = SuiteResult(suite=suite)
    for check in SUITES[suite]:
        logger.debug(f"running {suite}.{check.__name__}")
        outcome = check(ctx)
        if not outcome.passed:
            logger.warning(f"{suite}.{outcome.name} failed", witnesses=outcome.witnesses[:3])
        result.checks.append(outcome)
    return result


def run_props(
    suite: Union[Suite, str] = Suite.all,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    tol: Optional[float] = None,
    strict: bool = False,
) -> PropsReport:
    suite = Suite(str(suite))
    seed = settings.RANDOM_STATE if seed is None else seed
    suites = [s for s in SUITES] if suite == Suite.all else [suite]
    results = [run_suite(s, seed=seed, samples=samples, tol=tol) for s in suites]
    report = PropsReport(
        seed=seed,
        passed=all(result.passed for result in results),
        suites=results,
    )
    if strict and not report.passed:
        violations = [
            PropertyViolation(
                f"{result.suite}.{check.name}", "; ".join(check.witnesses) or "failed"
            )
            for result in results
            for check in result.checks
            if not check.passed
        ]
        raise ExceptionGroup("property checks failed", violations)
    return report
