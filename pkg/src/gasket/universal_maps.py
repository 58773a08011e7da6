"""
The two universal maps.

- `initial_morphism`: from (G, g) into any algebra, by recursion on the
  length of an address.
- `final_morphism`: from any coalgebra into (S, s), by running the
  structure map and recording the letters it emits (corecursion). The
  length-n truncations θₙ(x) form a Cauchy sequence in G whose limit is f(x).

Both come with sample-based checks, and `blowup_experiment` measures how the
final morphism out of the staircase coalgebra stretches distances.
"""
import math
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
import pandas as pd
import structlog

from gasket.addresses import Address, glued_partner
from gasket.coalgebras import cantor_coalgebra
from gasket.completion import (
    AddressStream,
    completion_space,
    corner_stream,
    s_structure,
    stream_distance,
    tensor_stream_distance,
)
from gasket.euclidean import Point2
from gasket.exceptions import IllDefinedAlgebraError, NotInCarrierError, ParameterError
from gasket.sampling import get_rng
from gasket.settings import get_settings
from gasket.spaces import (
    Algebra,
    Coalgebra,
    PointedMap,
    TensorPoint,
    check_regularity,
    tensor_space,
)
from gasket.types.main import LETTERS, Corner, RegularityKind
from gasket.types.reports import RegularityReport, ShortnessReport, SquareReport, Witness
from gasket.utils.formatting import format_point

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = [
    "IterationState",
    "initial_morphism",
    "corecursive_step",
    "iterate",
    "theta",
    "final_morphism",
    "depth_for_final_tolerance",
    "check_square",
    "check_short_preservation",
    "check_final_continuity",
    "blowup_experiment",
]


class IterationState(NamedTuple):
    """χₙ = m₀⊗⋯⊗m_{n-1}⊗xₙ: the letters emitted so far and the current point."""

    emitted: str
    current: Any

    @classmethod
    def start(cls, point: Any) -> "IterationState":
        return cls("", point)


def initial_morphism(alg: Algebra, check_gluing: bool = True) -> Callable[[Address], Any]:
    """
    φ: G → A with φ(z) = z_A and φ(m⊗rest) = α(m⊗φ(rest)).

    With `check_gluing`, each address that has a second raw representation is
    evaluated along both; a mismatch means α is not well-defined on M⊗A.
    """
    space = alg.space

    def evaluate(addr: Address) -> Any:
        point = space.corner(addr.corner)
        for letter in reversed(addr.word):
            point = alg.structure(TensorPoint(letter, point))
        return point

    def phi(addr: Address) -> Any:
        point = evaluate(addr)
        if check_gluing:
            partner = glued_partner(addr)
            if partner is not None:
                distance = space.metric(point, evaluate(partner))
                if distance > settings.POINT_TOLERANCE:
                    raise IllDefinedAlgebraError(addr, partner, distance)
        return point

    return phi


def corecursive_step(co: Coalgebra, st: IterationState) -> IterationState:
    """Apply e to the current point, append the letter it emits, continue from its point."""
    image = co.structure(st.current)
    if (
        not isinstance(image, TensorPoint)
        or image.letter not in LETTERS
        or not co.space.contains(image.inner)
    ):
        inner = image.inner if isinstance(image, TensorPoint) else image
        raise NotInCarrierError(inner, source=st.current)
    return IterationState(st.emitted + image.letter, image.inner)


def iterate(co: Coalgebra, x: Any) -> Iterator[IterationState]:
    """χ₁, χ₂, … from x."""
    state = IterationState.start(x)
    while True:
        state = corecursive_step(co, state)
        yield state


def theta(co: Coalgebra, x: Any, n: int, corner: Corner = Corner.T) -> Address:
    """θₙ(x) = m₀⊗⋯⊗m_{n-1}⊗corner (the raw address, not canonicalized)."""
    if n < 0:
        raise ValueError(f"depth must be >= 0, got {n}")
    state = IterationState.start(x)
    for _ in range(n):
        state = corecursive_step(co, state)
    return Address(state.emitted, Corner(str(corner)))


def final_morphism(co: Coalgebra, x: Any) -> AddressStream:
    """f(x) = lim θₙ(x), as the stream of emitted letters."""

    def letters() -> Iterator[str]:
        for state in iterate(co, x):
            yield state.emitted[-1]

    return AddressStream.from_letters(letters())


def depth_for_final_tolerance(tol: float) -> int:
    """n with 2**(1-n) <= tol, enough letters of f(x) to place it within tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    return max(1, math.ceil(math.log2(1 / tol)) + 1)


def _witness(left: Any, right: Any, distance: float, image_distance: float) -> Witness:
    return Witness(
        left=format_point(left),
        right=format_point(right),
        distance=distance,
        image_distance=image_distance,
    )


def check_square(
    co: Coalgebra,
    samples: Optional[int] = None,
    tol: Optional[float] = None,
    morphism: Callable[[Coalgebra, Any], AddressStream] = final_morphism,
    rng: Optional[np.random.Generator] = None,
    points: Iterable[Any] = (),
) -> SquareReport:
    """
    Whether s∘f = (M⊗f)∘e on sampled x: the certified interval for
    d_{M⊗S}(s(f x), (M⊗f)(e x)) must reach down to 0.
    """
    samples = settings.NUM_SAMPLES if samples is None else samples
    tol = settings.DEFAULT_TOLERANCE if tol is None else tol
    rng = rng or get_rng()
    xs = list(points) + [co.space.sample(rng) for _ in range(samples)]

    failures = []
    max_lower_bound = 0.0
    for x in xs:
        head, tail = s_structure(morphism(co, x))
        letter, inner = co.structure(x)
        approx = tensor_stream_distance(head, tail, letter, morphism(co, inner), tol)
        max_lower_bound = max(max_lower_bound, approx.lo)
        if approx.lo > 0:
            image = TensorPoint(letter, inner)
            failures.append((approx.lo, _witness(x, image, 0.0, approx.value)))

    failures.sort(key=lambda failure: -failure[0])
    witnesses = [witness for _, witness in failures[: settings.MAX_WITNESSES]]
    if failures:
        logger.warning(f"square fails for `{co.name}` on {len(failures)} of {len(xs)} points")
    return SquareReport(
        coalgebra=co.name,
        samples=len(xs),
        tol=tol,
        passed=not failures,
        max_lower_bound=max_lower_bound,
        witnesses=witnesses,
    )


def structure_as_map(co: Coalgebra) -> PointedMap:
    """e: X → M⊗X as a map between tripointed spaces."""
    return PointedMap(
        function=co.structure,
        domain=co.space,
        codomain=tensor_space(co.space),
        name=f"e_{co.name}",
    )


def check_short_preservation(
    co: Coalgebra,
    samples: Optional[int] = None,
    tol: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
    extra_pairs: Sequence[Tuple[Any, Any]] = (),
) -> ShortnessReport:
    """
    When e is short, f is short: the upper end of the certified d_S(f x, f y)
    is <= d_X(x, y) + tol on sampled pairs. d_S is certified to tol/4, so a
    short f always leaves room under the bound.

    e is checked first; if it is not short on the samples (or on `extra_pairs`)
    the status is "precondition unmet" and the witnesses are the pairs e expands.
    """
    samples = settings.NUM_SAMPLES if samples is None else samples
    tol = settings.DEFAULT_TOLERANCE if tol is None else tol
    rng = rng or get_rng()

    precondition = check_regularity(
        structure_as_map(co),
        RegularityKind.short,
        samples=samples,
        rng=rng,
        extra_pairs=extra_pairs,
    )
    if not precondition.passed:
        logger.debug(f"`{co.name}` is not short, skipping the transfer check")
        expanded = [w for w in precondition.witnesses if w.image_distance > w.distance]
        return ShortnessReport(
            coalgebra=co.name,
            status="precondition unmet",
            samples=precondition.samples,
            tol=tol,
            witnesses=expanded,
            precondition=precondition,
        )

    failures = []
    max_excess = float("-inf")
    pairs = list(extra_pairs) + co.space.sample_pairs(rng, samples)
    for x, y in pairs:
        distance = co.space.metric(x, y)
        approx = stream_distance(final_morphism(co, x), final_morphism(co, y), tol / 4)
        excess = approx.hi - distance - tol
        max_excess = max(max_excess, excess)
        if excess > 0:
            failures.append((excess, _witness(x, y, distance, approx.hi)))

    failures.sort(key=lambda failure: -failure[0])
    return ShortnessReport(
        coalgebra=co.name,
        status="fail" if failures else "pass",
        samples=len(pairs),
        tol=tol,
        max_excess=max_excess if pairs else 0.0,
        witnesses=[witness for _, witness in failures[: settings.MAX_WITNESSES]],
        precondition=precondition,
    )


def check_final_continuity(
    co: Coalgebra,
    epsilons: Sequence[float] = (0.5, 0.25, 0.125, 0.0625),
    samples: Optional[int] = None,
    tol: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> RegularityReport:
    """Sampled epsilon-delta table for f: X → S."""
    tol = settings.DEFAULT_TOLERANCE if tol is None else tol
    f = PointedMap(
        function=lambda x: final_morphism(co, x),
        domain=co.space,
        codomain=completion_space(tol),
        name=f"f_{co.name}",
    )
    return check_regularity(
        f,
        RegularityKind.continuous,
        samples=samples,
        epsilons=epsilons,
        rng=rng,
    )


def staircase_pair(j: int, n: int) -> Tuple[Fraction, Fraction]:
    """xₙ = 1/j + … + (1/j)ⁿ and yₙ = xₙ + (1/j)ⁿ, exactly."""
    x = sum((Fraction(1, j**k) for k in range(1, n + 1)), Fraction(0))
    return x, x + Fraction(1, j**n)


def blowup_experiment(j: int, depth: int, lipschitz_constant: float = 1.0) -> pd.DataFrame:
    """
    Rows n = 1..depth for the staircase coalgebra e_j: d_C(xₙ, yₙ) = j⁻ⁿ, the
    certified interval for d_S(f xₙ, f yₙ), their ratio, and the lower bound
    (j/2K)ⁿ any final morphism into a space whose structure map has
    bilipschitz constant K would have to reach.

    f xₙ = b^ω and f yₙ = bⁿ·c^ω, so d_S = 2⁻ⁿ and the ratio is (j/2)ⁿ: no
    Lipschitz constant bounds f.
    """
    if j < 4:
        raise ParameterError(f"j >= 4 required by the construction, got {j}")
    if depth < 1 or depth > settings.BLOWUP_MAX_DEPTH:
        raise ParameterError(f"depth must be in 1..{settings.BLOWUP_MAX_DEPTH}, got {depth}")
    if lipschitz_constant < 1:
        raise ParameterError(f"a bilipschitz constant is >= 1, got {lipschitz_constant}")

    co = cantor_coalgebra(j)
    rows = []
    for n in range(1, depth + 1):
        x, y = staircase_pair(j, n)
        d_c = Fraction(1, j**n)
        # resolve d_S well below its expected size 2^-n
        approx = stream_distance(
            final_morphism(co, Point2(x, 0)),
            final_morphism(co, Point2(y, 0)),
            tol=2.0 ** -(n + 12),
        )
        d_s = approx.simplest_dyadic()
        rows.append(
            {
                "n": n,
                "d_C": float(d_c),
                "d_S_lo": max(0.0, approx.lo),
                "d_S_hi": approx.hi,
                "ratio": float(d_s.as_fraction() / d_c),
                "bound": (j / (2 * lipschitz_constant)) ** n,
            }
        )
    logger.debug(f"blow-up for {j=} up to {depth=}")
    return pd.DataFrame(rows, columns=["n", "d_C", "d_S_lo", "d_S_hi", "ratio", "bound"])


def corner_images(co: Coalgebra) -> List[AddressStream]:
    """f(T), f(L), f(R); equal to a^ω, b^ω, c^ω whenever e fixes the corners."""
    return [final_morphism(co, z) for z in co.space.distinguished]


def constant_morphism(co: Coalgebra, x: Any) -> AddressStream:
    """x ↦ T_S; the square fails wherever e emits b or c."""
    return corner_stream("T")
