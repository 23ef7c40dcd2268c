#!python3
"""
malstein-run computes exact distances to the normal law and explicit
normal-approximation bounds for monochromatic edge counts, random sums,
degenerate U-statistics and arbitrary finite laws, and runs the randomized
invariant suite of the library.
"""

import argparse as ap
import sys
from typing import Dict, Tuple, Union

import yaml

from malstein.exceptions import MalsteinError, RunConfigError, SpaceTooLargeError

COMMANDS = ["verify", "mono", "randsum", "dejong", "distances"]
FORMATS = ["json", "csv"]

# Flags each command cannot run without
REQUIRED_FLAGS = {
    "verify": [],
    "mono": ["edges", "colors"],
    "randsum": ["spec"],
    "dejong": ["spec", "p", "kappa"],
    "distances": ["law"],
}

parser = ap.ArgumentParser(
    prog="malstein-run",
    description=(
        "Exact Malliavin-Stein bounds and distances to the normal law on "
        "finite product spaces."
    ),
    epilog=(
        "Example usage:\n"
        "  malstein-run mono --edges k3.txt --colors 2 --format json"
    ),
)

parser.add_argument("command", type=str, choices=COMMANDS, help="What to compute.")

parser.add_argument(
    "--edges",
    type=str,
    required=False,
    default=None,
    help="Edge list of the graph, one 'u v' pair per line. Used by mono.",
)

parser.add_argument(
    "--colors",
    type=int,
    required=False,
    default=None,
    help="Number of colors, at least two. Used by mono.",
)

parser.add_argument(
    "--spec",
    type=str,
    required=False,
    default=None,
    help=(
        "JSON or YAML document: the random sum laws for randsum, or the "
        "space and value table of the functional for dejong."
    ),
)

parser.add_argument(
    "--law",
    type=str,
    required=False,
    default=None,
    help="JSON or YAML document with 'atoms' and 'probs'. Used by distances.",
)

parser.add_argument(
    "--p", type=int, required=False, default=None, help="Order of the U-statistic."
)

parser.add_argument(
    "--kappa",
    type=float,
    required=False,
    default=None,
    help="Hypercontractivity constant for the order of the U-statistic.",
)

parser.add_argument(
    "--samples",
    type=int,
    required=False,
    default=None,
    help="Number of Monte Carlo colorings drawn by mono. Default: 0.",
)

parser.add_argument(
    "--seed", type=int, required=False, default=None, help="Random seed. Default: 0."
)

parser.add_argument(
    "--format",
    type=str,
    required=False,
    default=None,
    choices=FORMATS,
    help="Output format. Default: json.",
)

parser.add_argument(
    "--max-outcomes",
    type=int,
    required=False,
    default=None,
    help=(
        "Largest product space enumerated exactly. Default: the "
        "MALSTEIN_MAX_OUTCOMES environment variable, or 2^24."
    ),
)

parser.add_argument(
    "--workers",
    type=int,
    required=False,
    default=None,
    help="Threads used by the Monte Carlo sampler. Default: 1.",
)

parser.add_argument(
    "--config",
    type=str,
    required=False,
    default=None,
    help="YAML file whose keys mirror the long flags. Flags override it.",
)

parser.add_argument(
    "-d",
    "--debug",
    required=False,
    default=False,
    action="store_true",
    help="Run in debug mode if this flag is present. Default: no.",
)


class RunConfig(object):
    """
    A validated command line configuration. Values come from the optional
    YAML configuration file, overridden by explicit flags.
    """

    command: str
    edges: Union[str, None]
    colors: Union[int, None]
    spec: Union[str, None]
    law: Union[str, None]
    p: Union[int, None]
    kappa: Union[float, None]
    samples: int
    seed: int
    format: str
    max_outcomes: Union[int, None]
    workers: int
    debug: bool

    def __init__(self, command: str, flags: Dict, file_data: Union[Dict, None] = None):
        self.data = {}

        for key, value in (file_data or {}).items():
            key = str(key).replace("-", "_")
            if key not in flags:
                raise RunConfigError(f"Unknown configuration key {key!r}.")
            self.data[key] = value

        self.data.update({key: value for key, value in flags.items() if value is not None})

        self._parse_command(command)
        self._parse_paths()
        self._parse_colors()
        self._parse_order()
        self._parse_kappa()
        self._parse_sampling()
        self._parse_format()
        self._parse_max_outcomes()
        self._check_required()

        self.debug = bool(self.data.get("debug", False))

        return

    @classmethod
    def from_arguments(cls, args: ap.Namespace) -> "RunConfig":
        flags = dict(vars(args))
        command = flags.pop("command")
        config_path = flags.pop("config")
        flags.pop("debug")

        file_data = None
        if config_path is not None:
            file_data = load_document(config_path)
            if not isinstance(file_data, dict):
                raise RunConfigError(f"{config_path} does not hold a mapping.")

        config = cls(command, flags, file_data)
        config.debug = args.debug

        return config

    def _integer(self, key: str, minimum: int) -> Union[int, None]:
        value = self.data.get(key)
        if value is None:
            return None

        if isinstance(value, bool) or not isinstance(value, int):
            raise RunConfigError(f"{key} must be an integer, got {value!r}.")

        if value < minimum:
            raise RunConfigError(f"{key} must be at least {minimum}, got {value}.")

        return value

    def _parse_command(self, command: str) -> None:
        if command not in COMMANDS:
            raise RunConfigError(f"Unknown command {command!r}; choose from {COMMANDS}.")

        self.command = command

    def _parse_paths(self) -> None:
        for key in ["edges", "spec", "law"]:
            value = self.data.get(key)
            if value is not None and not isinstance(value, str):
                raise RunConfigError(f"{key} must be a path, got {value!r}.")
            setattr(self, key, value)

    def _parse_colors(self) -> None:
        self.colors = self._integer("colors", 2)

    def _parse_order(self) -> None:
        self.p = self._integer("p", 1)

    def _parse_kappa(self) -> None:
        value = self.data.get("kappa")
        if value is None:
            self.kappa = None
            return

        try:
            self.kappa = float(value)
        except (TypeError, ValueError):
            raise RunConfigError(f"kappa must be a number, got {value!r}.")

        if not self.kappa > 0.0:
            raise RunConfigError(f"kappa must be positive, got {value!r}.")

    def _parse_sampling(self) -> None:
        self.samples = self._integer("samples", 0) or 0
        self.seed = self._integer("seed", 0) or 0
        self.workers = self._integer("workers", 1) or 1

    def _parse_format(self) -> None:
        self.format = self.data.get("format", "json")
        if self.format not in FORMATS:
            raise RunConfigError(f"format must be one of {FORMATS}, got {self.format!r}.")

    def _parse_max_outcomes(self) -> None:
        self.max_outcomes = self._integer("max_outcomes", 1)

    def _check_required(self) -> None:
        missing = [
            key for key in REQUIRED_FLAGS[self.command] if getattr(self, key) is None
        ]
        if missing:
            flags = ", ".join(f"--{key}" for key in missing)
            raise RunConfigError(f"{self.command} needs {flags}.")


def load_document(path: str):
    """
    Reads a JSON or YAML document.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return yaml.safe_load(handle)
    except OSError as error:
        raise RunConfigError(f"Could not read {path}: {error.strerror}.")
    except yaml.YAMLError as error:
        raise RunConfigError(f"Could not parse {path}: {error}")


def _exact_distances(F) -> Dict[str, float]:
    from malstein.space.law import law_of
    from malstein.stein.distances import distances

    kolmogorov, wasserstein = distances(law_of(F))

    return {"kolmogorov": kolmogorov, "wasserstein": wasserstein}


def run_verify(config: RunConfig, print_if_debug) -> Tuple[int, Dict]:
    from malstein.verification import run_verification

    print_if_debug(f"Running the invariant suite with seed {config.seed}.")
    report = run_verification(config.seed, progress=config.debug)

    return (0 if report.all_passed else 1), report.to_dict()


def run_mono(config: RunConfig, print_if_debug) -> Tuple[int, Dict]:
    from malstein.applications.graph_coloring import (
        fang_bound,
        graph_stats,
        mono_bound,
        mono_edge_functional,
        read_edge_list,
        t2_moments,
    )
    from malstein import analyze

    print_if_debug(f"Reading the edge list at {config.edges}.")
    graph = read_edge_list(config.edges)
    stats = graph_stats(graph)
    mean, variance = t2_moments(graph.m, config.colors)

    document = {
        "m": graph.m,
        "n": graph.n,
        "colors": config.colors,
        "mean": mean,
        "variance": variance,
        "graph_stats": stats.to_dict(),
        "mono_bound": mono_bound(stats, config.colors).to_dict(),
        "fang_bound": fang_bound(graph.m, config.colors),
        "exact": None,
    }

    try:
        _, F = mono_edge_functional(graph, config.colors, config.max_outcomes)
    except SpaceTooLargeError as error:
        print_if_debug(f"Skipping exact computations: {error.message}")
        F = None

    if F is not None:
        print_if_debug(f"Enumerating {F.space.total_outcomes} colorings.")
        exact = analyze(F)
        document["exact"] = {
            "distances": {key: exact[key] for key in ["kolmogorov", "wasserstein"]},
            "bounds": [report.to_dict() for report in exact["bounds"]],
        }

    if config.samples > 0:
        from malstein.montecarlo.empirical import empirical_kolmogorov
        from malstein.montecarlo.sampling import sample_mono_edges

        print_if_debug(f"Drawing {config.samples} colorings on {config.workers} threads.")
        summary = sample_mono_edges(
            graph,
            config.colors,
            config.samples,
            config.seed,
            workers=config.workers,
            progress=config.debug,
        )
        estimate, radius = empirical_kolmogorov(summary)
        document["monte_carlo"] = {
            "n_samples": summary.n_samples,
            "seed": summary.seed,
            "empirical_kolmogorov": estimate,
            "dkw_radius": radius,
        }

    return 0, document


def run_randsum(config: RunConfig, print_if_debug) -> Tuple[int, Dict]:
    from malstein.applications.random_sums import (
        RandomSumSpec,
        random_sum_functional,
        rs_bound,
    )

    print_if_debug(f"Reading the random sum laws at {config.spec}.")
    spec = RandomSumSpec.from_document(load_document(config.spec))

    document = {"spec": spec.to_dict(), "rs_bound": rs_bound(spec).to_dict(), "exact": None}

    try:
        _, F = random_sum_functional(spec, config.max_outcomes)
    except SpaceTooLargeError as error:
        print_if_debug(f"Skipping exact computations: {error.message}")
    else:
        document["exact"] = {"distances": _exact_distances(F)}

    return 0, document


def run_dejong(config: RunConfig, print_if_debug) -> Tuple[int, Dict]:
    from malstein.bounds.dejong import dejong_bounds
    from malstein.space.functional import functional_from_document

    print_if_debug(f"Reading the functional at {config.spec}.")
    F = functional_from_document(load_document(config.spec), config.max_outcomes)
    wasserstein, kolmogorov = dejong_bounds(F, config.p, config.kappa)

    document = {
        "dejong_wasserstein": wasserstein.to_dict(),
        "dejong_kolmogorov": kolmogorov.to_dict(),
        "exact": {"distances": _exact_distances(F)},
    }

    return 0, document


def run_distances(config: RunConfig, print_if_debug) -> Tuple[int, Dict]:
    from malstein.space.law import LawOfF
    from malstein.stein.distances import distances

    print_if_debug(f"Reading the law at {config.law}.")
    law = LawOfF.from_dict(load_document(config.law))
    kolmogorov, wasserstein = distances(law)

    return 0, {"law": law.to_dict(), "kolmogorov": kolmogorov, "wasserstein": wasserstein}


RUNNERS = {
    "verify": run_verify,
    "mono": run_mono,
    "randsum": run_randsum,
    "dejong": run_dejong,
    "distances": run_distances,
}


def run(config: RunConfig) -> Tuple[int, str]:
    """
    Runs a validated configuration.

    Returns
    -------

    Tuple[int, str]
        The exit code (0 on success, 1 if an invariant failed) and the
        rendered result document.
    """
    from malstein.output import render

    def print_if_debug(string: str):
        if config.debug:
            print(string, file=sys.stderr)

    exit_code, document = RUNNERS[config.command](config, print_if_debug)
    document["command"] = config.command

    return exit_code, render(document, config.format)


def _report_error(error: MalsteinError) -> int:
    from malstein.output import to_json

    print(
        to_json({"error": type(error).__name__, "message": error.message}),
        file=sys.stderr,
    )

    return 2


def malstein_run(argv=None) -> int:
    args = parser.parse_args(argv)

    if args.debug:
        print("Running in debug mode. Arguments given are:", file=sys.stderr)
        for name, value in dict(vars(args)).items():
            print(f"{name}: {value}", file=sys.stderr)

    try:
        config = RunConfig.from_arguments(args)
        exit_code, text = run(config)
    except MalsteinError as error:
        return _report_error(error)
    except OSError as error:
        return _report_error(
            RunConfigError(f"Could not read {error.filename}: {error.strerror}.")
        )

    print(text)

    return exit_code


def main():
    sys.exit(malstein_run())


if __name__ == "__main__":
    main()
