from argparse import Namespace
import os
from typing import Any, Dict, Optional

from fraccomp.util.constants import *


class FCSingleton(type):
    """
    Python singleton implementation:
    https://stackoverflow.com/questions/6760685/creating-a-singleton-in-python

    """
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super().__call__(*args, **kwargs)

        return cls._instances[cls]


class FCConfig(metaclass=FCSingleton):
    """
    Stores run-wide settings passed by user when running program.
    Numerical modules take their defaults from the constants table; a job may override the
    subset listed in `PRECISION_KEYS`, and the resolved values are embedded in every output.

    Attributes:
        threads: Number of worker processes used by parallel parts (Monte Carlo, per-point inversions).
        seed: Seed of stochastic commands.
        precision: Resolved precision settings (defaults updated by job overrides).
        out: Output path override given on command line.

    """

    def __init__(self) -> None:
        self.threads = 1
        self.seed = None
        self.out = None
        self.precision = dict(PRECISION_KEYS)

    def set_args(self, args: Namespace) -> None:
        """
        Sets arguments passed by user/by default.

        :param args: Argparse arguments.
        """
        self.threads = resolve_threads(getattr(args, "threads", None))
        self.seed = getattr(args, "seed", None)
        self.out = getattr(args, "out", None)

    def set_precision(self, overrides: Optional[Dict[str, Any]]) -> None:
        """
        Applies precision overrides of a job on top of the defaults table.

        :param overrides: Validated overrides, may be None.
        """
        self.precision = dict(PRECISION_KEYS)
        if overrides:
            unknown = set(overrides) - set(PRECISION_KEYS)
            if unknown:
                raise ValueError(f"Unknown precision keys: {sorted(unknown)}")
            self.precision.update(overrides)

    def get(self, key: str) -> Any:
        return self.precision[key]

    def resolved(self) -> Dict[str, Any]:
        """
        Returns all resolved settings, used in output headers.

        :return: Flat dict of settings.
        """
        resolved = {"threads": self.threads, "seed": self.seed}
        resolved.update(self.precision)
        return resolved

    def reset(self) -> None:
        self.__init__()


def resolve_threads(threads: Optional[int]) -> int:
    """
    Resolves number of threads: command line first, then environment, then 1.

    :param threads: Value given on command line.
    :return: Number of threads >= 1.
    """
    if threads is None:
        env = os.getenv(THREADS_ENV)
        if env is None or env.strip() == "":
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got '{env}'.")
    if threads < 1:
        raise ValueError(f"Number of threads must be >= 1, got {threads}.")

    return threads
