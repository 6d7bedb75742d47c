"""Scikit-learn style estimator facade.

These classes follow the sklearn API conventions (constructor stores
hyperparameters verbatim, ``fit`` consumes a square weight matrix and
returns ``self``, fitted attributes get a trailing underscore, and
``get_params``/``set_params`` support cloning and grid composition)
without requiring scikit-learn itself.
"""

from __future__ import annotations

import inspect

import numpy as np

from . import inference
from .network import EffectKind
from .validation import as_network

__all__ = ["NetworkEffectTest", "LocalNetworkEffects"]


class ParamsMixin:
    """get_params / set_params over the constructor signature."""

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [name for name in sig.parameters if name != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"invalid parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


class NetworkEffectTest(ParamsMixin):
    """Test one network effect on a weighted directed adjacency matrix.

    Parameters
    ----------
    effect : str or EffectKind, default "reciprocity"
        One of "reciprocity", "same_sender", "same_receiver",
        "sender_receiver" (or the short forms eta2..eta5).
    alpha : float, default 0.05
        Two-sided significance level.
    subsample_exponent : float, default 1.2
        Quadruple subsample size is round(n ** subsample_exponent);
        larger values buy power at some cost in size accuracy and time.
    random_state : int, default 0
        Seed for quadruple subsampling on the reduced branch.
    diagnostic_constant : float, default 1.0
        Multiplier on the degeneracy threshold (reciprocity and
        sender-receiver only).
    repeats : int, default 1
        Number of independent subsample draws on the reduced branch;
        their p-values are combined by z-averaging.

    Attributes (after ``fit``)
    --------------------------
    report_ : TestReport with the full outcome, plus the convenience
    mirrors ``statistic_``, ``p_value_``, ``reject_``, ``branch_``,
    ``estimate_`` and ``diagnosis_`` (None for the always-degenerate
    effects).

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> w = rng.normal(size=(60, 60)); np.fill_diagonal(w, 0.0)
    >>> test = NetworkEffectTest(effect="same_sender").fit(w)
    >>> bool(test.reject_)
    False
    """

    def __init__(
        self,
        effect: str | EffectKind = "reciprocity",
        alpha: float = 0.05,
        subsample_exponent: float = 1.2,
        random_state: int = 0,
        diagnostic_constant: float = 1.0,
        repeats: int = 1,
    ):
        self.effect = effect
        self.alpha = alpha
        self.subsample_exponent = subsample_exponent
        self.random_state = random_state
        self.diagnostic_constant = diagnostic_constant
        self.repeats = repeats

    def fit(self, X, y=None):
        """Run the degeneracy-aware test pipeline on weight matrix X."""
        if self.repeats < 1:
            raise ValueError(f"repeats must be at least 1, got {self.repeats}")
        net = as_network(X)
        effect = self.effect if isinstance(self.effect, EffectKind) else EffectKind.parse(self.effect)
        seeds = tuple(int(s) for s in _derive_seeds(self.random_state, self.repeats))
        if self.repeats == 1:
            report = inference.test_effect(
                net,
                effect,
                alpha=self.alpha,
                subsample_exponent=self.subsample_exponent,
                seed=seeds[0],
                c_constant=self.diagnostic_constant,
            )
        else:
            report = inference.test_effect_repeated(
                net,
                effect,
                alpha=self.alpha,
                subsample_exponent=self.subsample_exponent,
                seeds=seeds,
                c_constant=self.diagnostic_constant,
            )
        self.n_nodes_ = net.n
        self.report_ = report
        self.statistic_ = report.statistic
        self.p_value_ = report.p_value
        self.reject_ = report.reject
        self.branch_ = report.branch
        self.estimate_ = report.estimate.value
        self.diagnosis_ = report.diagnosis
        return self


def _derive_seeds(random_state: int, repeats: int) -> list[int]:
    """Independent, order-stable subsample seeds from one user seed."""
    root = np.random.SeedSequence(random_state)
    return [int(child.generate_state(1)[0]) for child in root.spawn(repeats)]


class LocalNetworkEffects(ParamsMixin):
    """Transformer mapping an (n, n) weight matrix to per-node local effects.

    ``transform`` returns an (n, 4) array with columns reciprocity,
    same-sender, same-receiver, sender-receiver, suitable for plotting or
    downstream feature use.
    """

    COLUMNS = ("reciprocity", "same_sender", "same_receiver", "sender_receiver")

    def __init__(self):
        pass

    def fit(self, X, y=None):
        as_network(X)  # validation only; the transform is stateless
        return self

    def transform(self, X) -> np.ndarray:
        le = inference.local_effects(as_network(X))
        return np.column_stack([le.reciprocity, le.same_sender, le.same_receiver, le.sender_receiver])

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).transform(X)
