"""
The randomized invariant suite run by ``malstein-run verify``.

Every family draws random product spaces with 2 to 4 coordinates (supports
of size 2 or 3) and random functionals on them, then checks an exact
identity or inequality of the operators and bounds within a tolerance
scaled to the size of the inputs.
"""

from typing import Callable, Dict, List, Tuple

import numpy as np

from malstein.bounds.generic import all_generic_bounds
from malstein.calculus.hoeffding import decompose, influences
from malstein.calculus.malliavin import (
    d_k,
    divergence,
    efron_stein_term,
    gamma0,
    gradient,
    increment_moment,
    ou_generator,
    ou_pseudo_inverse,
    stroock_component,
)
from malstein.exceptions import MalsteinError
from malstein.space.functional import Functional, conditional_expectation, prefix_expectation
from malstein.space.law import law_of
from malstein.space.product_space import DiscreteDistribution, ProductSpace
from malstein.space.subsets import full_mask, members, popcount
from malstein.stein.chain import chain_remainders
from malstein.stein.distances import distances
from malstein.stein.normal import normal_cdf
from malstein.stein.solutions import psi_sup_norm_bound, psi_z, psi_z_prime

TOLERANCE = 1e-9
DEFAULT_TRIALS = 500


def random_space(
    rng: np.random.Generator,
    min_coordinates: int = 2,
    max_coordinates: int = 4,
    min_support: int = 2,
    max_support: int = 3,
) -> ProductSpace:
    """
    A product space with random supports and random positive
    probabilities.
    """
    coords = []
    for _ in range(int(rng.integers(min_coordinates, max_coordinates + 1))):
        size = int(rng.integers(min_support, max_support + 1))
        probs = rng.dirichlet(np.ones(size)) + 0.05
        coords.append(
            DiscreteDistribution(np.sort(rng.normal(size=size)), probs / probs.sum())
        )

    return ProductSpace(coords)


def random_functional(space: ProductSpace, rng: np.random.Generator) -> Functional:
    return Functional(space, rng.normal(size=space.total_outcomes))


def normalized(F: Functional) -> Functional:
    """
    (F - E[F]) / sd(F).
    """
    return (F - F.mean) / np.sqrt(F.variance)


def _close(a: float, b: float, scale: float = 1.0) -> bool:
    return abs(a - b) <= TOLERANCE * max(1.0, scale)


def _inner(F: Functional, G: Functional) -> float:
    return float(np.dot(F.space.probabilities, F.table * G.table))


def _carre_du_champ(F: Functional, G: Functional) -> Functional:
    """
    Gamma(F, G) = (L(FG) - F LG - G LF) / 2.
    """
    return 0.5 * (ou_generator(F * G) - F * ou_generator(G) - G * ou_generator(F))


def check_hoeffding_reconstruction(F, G, rng) -> bool:
    decomposition = decompose(F)
    variance = sum(v for mask, v in decomposition.variances.items() if mask)
    return decomposition.reconstruct().max_abs_difference(F) <= TOLERANCE * max(
        1.0, F.scale
    ) and _close(variance, F.variance, F.scale ** 2)


def check_hoeffding_orthogonality(F, G, rng) -> bool:
    decomposition = decompose(F)
    components = decomposition.components
    n = F.space.n_coordinates
    scale = max(1.0, F.scale) ** 2

    for mask, component in components.items():
        for other, other_component in components.items():
            if other > mask and abs(_inner(component, other_component)) > TOLERANCE * scale:
                return False

        # E[F_M | F_K] vanishes unless M is contained in K
        for conditioning in range(full_mask(n) + 1):
            if mask & ~conditioning:
                projected = conditional_expectation(component, conditioning)
                if projected.scale > TOLERANCE * max(1.0, F.scale):
                    return False

    return True


def check_stroock(F, G, rng) -> bool:
    decomposition = decompose(F)
    for mask in range(1, full_mask(F.space.n_coordinates) + 1):
        order = [int(k) for k in rng.permutation(members(mask))]
        difference = stroock_component(F, mask, order).max_abs_difference(
            decomposition.component(mask)
        )
        if difference > TOLERANCE * max(1.0, F.scale):
            return False
    return True


def check_influences(F, G, rng) -> bool:
    decomposition = decompose(F)
    weighted = sum(popcount(mask) * v for mask, v in decomposition.variances.items())
    return _close(float(np.sum(influences(F))), weighted, F.scale ** 2)


def check_generator(F, G, rng) -> bool:
    LF = ou_generator(F, check=True)
    return LF.max_abs_difference(-divergence(gradient(F))) <= TOLERANCE * max(1.0, F.scale)


def check_generator_self_adjoint(F, G, rng) -> bool:
    scale = F.scale * G.scale
    return _close(_inner(F, ou_generator(G)), _inner(G, ou_generator(F)), scale) and (
        _inner(F, -ou_generator(F)) >= -TOLERANCE * max(1.0, F.scale ** 2)
    )


def check_derivative_self_adjoint(F, G, rng) -> bool:
    scale = F.scale * G.scale
    return all(
        _close(_inner(F, d_k(G, k)), _inner(G, d_k(F, k)), scale)
        for k in range(F.space.n_coordinates)
    )


def check_chaos_eigenvalues(F, G, rng) -> bool:
    decomposition = decompose(F)
    for p in range(1, F.space.n_coordinates + 1):
        chaos = decomposition.chaos(p)
        if ou_generator(chaos).max_abs_difference(-p * chaos) > TOLERANCE * max(
            1.0, p * chaos.scale
        ):
            return False
    return True


def check_pseudo_inverse(F, G, rng) -> bool:
    centered = F - F.mean
    inverse = ou_pseudo_inverse(centered, check=True)
    return ou_generator(inverse).max_abs_difference(centered) <= TOLERANCE * max(
        1.0, centered.scale
    ) and abs(inverse.mean) <= TOLERANCE * max(1.0, centered.scale)


def check_carre_du_champ(F, G, rng) -> bool:
    scale = max(1.0, F.scale * G.scale) * F.space.n_coordinates
    return _close(_inner(F, ou_generator(G)), -gamma0(F, G).mean, scale) and (
        gamma0(F, G).max_abs_difference(_carre_du_champ(F, G)) <= TOLERANCE * scale
    )


def check_efron_stein(F, G, rng) -> bool:
    scale = F.scale * G.scale
    return all(
        _close(_inner(d_k(F, k), d_k(G, k)), efron_stein_term(F, G, k), scale)
        for k in range(F.space.n_coordinates)
    )


def check_covariance_identities(F, G, rng) -> bool:
    covariance = _inner(F, G) - F.mean * G.mean
    scale = max(1.0, F.scale * G.scale) * F.space.n_coordinates
    centered = F - F.mean
    inverse = ou_pseudo_inverse(centered)

    malliavin = -sum(
        _inner(d_k(inverse, k), d_k(G, k)) for k in range(F.space.n_coordinates)
    )
    clark_ocone = sum(
        _inner(d_k(prefix_expectation(F, k), k), d_k(G, k))
        for k in range(F.space.n_coordinates)
    )
    carre = gamma0(-inverse, G).mean

    return (
        _close(malliavin, covariance, scale)
        and _close(clark_ocone, covariance, scale)
        and _close(carre, covariance, scale)
    )


def check_poincare(F, G, rng) -> bool:
    decomposition = decompose(F)
    orders = [popcount(mask) for mask, v in decomposition.variances.items() if mask]
    top_order = max(orders) if orders else 0
    energy = float(np.sum(influences(F)))
    slack = TOLERANCE * max(1.0, F.scale ** 2)

    return F.variance <= energy + slack and energy <= top_order * F.variance + slack


def check_fourth_moment_identity(F, G, rng) -> bool:
    increments = sum(increment_moment(F, k, 4) for k in range(F.space.n_coordinates))
    mixture = 12.0 * _inner(F * F, gamma0(F, F)) + 4.0 * _inner(
        F * F * F, ou_generator(F)
    )
    return abs(increments - mixture) <= 10.0 * TOLERANCE * max(1.0, F.scale) ** 4


def check_chain_rule(F, G, rng) -> bool:
    z = float(rng.normal())
    for k in range(F.space.n_coordinates):
        R, S = chain_remainders(F, z, k)
        bound = 2.0 * np.abs(d_k(F, k).table) + TOLERANCE
        if np.any(np.abs(R.table) > bound) or np.any(np.abs(S.table) > bound):
            return False
    return True


def check_stein_solution(F, G, rng) -> bool:
    z = float(rng.uniform(-4.0, 4.0))
    x = np.sort(np.concatenate([rng.uniform(-12.0, 12.0, size=40), rng.normal(size=10)]))

    psi = psi_z(z, x)
    slope = psi_z_prime(z, x)
    residual = slope - x * psi - ((x <= z).astype(np.float64) - normal_cdf(z))
    scaled = x * psi

    return (
        np.max(np.abs(residual)) <= 1e-10
        and np.max(np.abs(psi)) <= psi_sup_norm_bound() + 1e-12
        and np.max(np.abs(slope)) <= 1.0 + 1e-10
        and np.all(np.diff(scaled) >= -1e-12)
        and np.max(np.abs(scaled)) <= 1.0 + 1e-12
    )


def check_distances(F, G, rng) -> bool:
    law = law_of(F)
    kolmogorov, wasserstein = distances(law)
    return (
        0.0 <= kolmogorov <= 1.0
        and wasserstein >= abs(law.mean) - 1e-12
        and kolmogorov <= np.sqrt(wasserstein) + 1e-12
    )


def check_bound_dominance(F, G, rng) -> bool:
    F = normalized(F)
    kolmogorov, wasserstein = distances(law_of(F))

    for report in all_generic_bounds(F):
        target = wasserstein if report.bound_name.endswith("wasserstein") else kolmogorov
        if report.total < target - TOLERANCE:
            return False
    return True


def check_first_terms(F, G, rng) -> bool:
    F = normalized(F)
    for report in all_generic_bounds(F)[::2]:
        mean = report.sub_terms.get(
            "integrand_product_mean", report.sub_terms.get("carre_du_champ_mean")
        )
        if not _close(mean, F.second_moment, F.scale ** 2):
            return False
    return True


FAMILIES: List[Tuple[str, Callable]] = [
    ("hoeffding_reconstruction", check_hoeffding_reconstruction),
    ("hoeffding_orthogonality", check_hoeffding_orthogonality),
    ("stroock_formula", check_stroock),
    ("influence_sum", check_influences),
    ("generator_is_minus_divergence_gradient", check_generator),
    ("generator_self_adjoint", check_generator_self_adjoint),
    ("derivative_self_adjoint", check_derivative_self_adjoint),
    ("chaos_eigenvalues", check_chaos_eigenvalues),
    ("pseudo_inverse", check_pseudo_inverse),
    ("carre_du_champ", check_carre_du_champ),
    ("efron_stein", check_efron_stein),
    ("covariance_identities", check_covariance_identities),
    ("poincare_chain", check_poincare),
    ("fourth_moment_identity", check_fourth_moment_identity),
    ("chain_rule_remainders", check_chain_rule),
    ("stein_solution", check_stein_solution),
    ("distance_sanity", check_distances),
    ("bound_dominance", check_bound_dominance),
    ("first_term_consistency", check_first_terms),
]


class VerificationReport(object):
    """
    Pass counts per invariant family.
    """

    seed: int
    trials: int
    passed: Dict[str, int]
    failures: Dict[str, List[int]]

    def __init__(self, seed: int, trials: int):
        self.seed = seed
        self.trials = trials
        self.passed = {name: 0 for name, _ in FAMILIES}
        self.failures = {name: [] for name, _ in FAMILIES}

        return

    @property
    def all_passed(self) -> bool:
        return all(count == self.trials for count in self.passed.values())

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "all_passed": self.all_passed,
            "families": [
                {
                    "name": name,
                    "passed": self.passed[name],
                    "failed_trials": list(self.failures[name]),
                }
                for name, _ in FAMILIES
            ],
        }


def run_verification(
    seed: int, trials: int = DEFAULT_TRIALS, progress: bool = False
) -> VerificationReport:
    """
    Runs every family on ``trials`` random pairs of functionals drawn from
    ``numpy.random.default_rng(seed)``.

    Parameters
    ----------

    seed: int
        Seed of the suite; identical seeds give identical reports.

    trials: int, optional
        Number of random pairs (F, G) per family.

    progress: bool, optional
        Show a progress bar over the trials.
    """
    rng = np.random.default_rng(seed)
    report = VerificationReport(seed, trials)

    trial_numbers = range(trials)
    if progress:
        from tqdm import tqdm

        trial_numbers = tqdm(trial_numbers, desc="Verifying invariants")

    for trial in trial_numbers:
        space = random_space(rng)
        F = random_functional(space, rng)
        G = random_functional(space, rng)

        for name, check in FAMILIES:
            try:
                passed = bool(check(F, G, rng))
            except MalsteinError:
                passed = False

            if passed:
                report.passed[name] += 1
            else:
                report.failures[name].append(trial)

    return report
