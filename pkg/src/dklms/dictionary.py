"""Per-node dictionary: RBF centers, innovation weights and the significance
bookkeeping that makes budget pruning possible.

A dictionary owns four parallel arrays (centers, weights, significances and
discounted-age accumulators) that double in capacity on demand, so adds are
amortized O(1) and predictions are single vectorized passes. Entry order is
insertion order; removal shifts later entries down, which keeps argmin tie
breaking reproducible.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError, StateError

_INITIAL_CAPACITY = 8


@dataclass
class DictionaryEntry:
    """One center with its weight, significance estimate and age accumulator."""

    center: np.ndarray
    weight: float
    significance: float
    age_accum: float


class Dictionary:
    """Ordered, growable store of dictionary entries for a single node."""

    def __init__(self, dim, budget=None):
        if int(dim) < 1:
            raise ShapeError(f"dictionary: center dimension must be >= 1, got {dim}")
        if budget is not None and int(budget) < 1:
            raise ConfigError(f"dictionary.budget: must be >= 1, got {budget}")
        self.dim = int(dim)
        self.budget = None if budget is None else int(budget)
        self._centers = np.zeros((_INITIAL_CAPACITY, self.dim))
        self._weights = np.zeros(_INITIAL_CAPACITY)
        self._sig = np.zeros(_INITIAL_CAPACITY)
        self._age = np.zeros(_INITIAL_CAPACITY)
        self._size = 0

    @classmethod
    def initial(cls, x0, eta, d0, budget=None):
        """Seed a dictionary with the first observation.

        With an empty hypothesis the first prediction is zero, so the first
        innovation equals the first desired value: the entry gets weight
        eta*d0, significance |d0| and age 1.
        """
        x0 = np.asarray(x0, dtype=float).ravel()
        d = cls(x0.size, budget=budget)
        d._append(x0, eta * float(d0), abs(float(d0)), 1.0)
        return d

    def __len__(self):
        return self._size

    @property
    def centers(self):
        return self._centers[: self._size]

    @property
    def weights(self):
        return self._weights[: self._size]

    @property
    def significances(self):
        return self._sig[: self._size]

    @property
    def ages(self):
        return self._age[: self._size]

    def _check_vec(self, x):
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.dim:
            raise ShapeError(f"dictionary: expected dimension {self.dim}, got {x.size}")
        return x

    def _grow(self):
        cap = 2 * len(self._weights)
        centers = np.zeros((cap, self.dim))
        centers[: self._size] = self._centers[: self._size]
        self._centers = centers
        for name in ("_weights", "_sig", "_age"):
            arr = np.zeros(cap)
            arr[: self._size] = getattr(self, name)[: self._size]
            setattr(self, name, arr)

    def _append(self, x, weight, significance, age):
        if self._size == len(self._weights):
            self._grow()
        i = self._size
        self._centers[i] = x
        self._weights[i] = weight
        self._sig[i] = significance
        self._age[i] = age
        self._size = i + 1

    def _kernel_to(self, point, params):
        diff = self._centers[: self._size] - point
        d2 = (diff * diff).sum(axis=1)
        return np.exp(-d2 / (params.sigma * params.sigma))

    def predict(self, x, params):
        """Weighted kernel sum over all entries at the query point."""
        if self._size == 0:
            raise StateError("predict: empty dictionary")
        x = self._check_vec(x)
        return float(self._weights[: self._size] @ self._kernel_to(x, params))

    def nearest_entry(self, x):
        """Index and Euclidean distance of the closest center.

        Ties go to the lowest index.
        """
        if self._size == 0:
            raise StateError("nearest_entry: empty dictionary")
        x = self._check_vec(x)
        diff = self._centers[: self._size] - x
        d2 = (diff * diff).sum(axis=1)
        j = int(np.argmin(d2))
        return j, float(np.sqrt(d2[j]))

    def merge_update(self, j_star, eta, diffused_error):
        """Fold the innovation eta*e' into the weight of entry j_star."""
        self._check_index(j_star)
        self._weights[j_star] += eta * diffused_error

    def add_entry(self, x, eta, diffused_error):
        """Append a new center with weight eta*e', significance |e'|, age 1."""
        x = self._check_vec(x)
        self._append(x, eta * diffused_error, abs(diffused_error), 1.0)

    def significance_on_add(self, abs_error, zeta, new_center, params):
        """Discount-and-reinforce every existing significance for an add.

        E_j <- zeta*E_j + |e'| * k(center_j, new_center). Call this before
        add_entry so only the pre-existing entries are touched; the new entry
        is then born with significance |e'| (its own kernel term is 1).
        """
        if self._size == 0:
            return
        new_center = self._check_vec(new_center)
        k = self._kernel_to(new_center, params)
        m = self._size
        self._sig[:m] = zeta * self._sig[:m] + abs_error * k

    def significance_on_merge(self, j_star, eta, error, zeta, params):
        """Significance and age recursions for a merge into entry j_star.

        For j != j_star: E_j <- zeta*E_j + |w_j| * k(c_j, c_{j_star}) and the
        age decays by zeta. The merged entry scales its discounted
        significance by |w_new|/|w_old| and adds |w_new|; a zero old weight
        makes that ratio singular, in which case only the zeta decay and the
        additive term are kept. Call this before merge_update so w_old is the
        pre-merge weight.
        """
        self._check_index(j_star)
        m = self._size
        k = self._kernel_to(self._centers[j_star], params)
        w = self._weights[:m]
        sig = self._sig[:m]
        age = self._age[:m]
        w_old = float(w[j_star])
        w_new = w_old + eta * error

        others = np.arange(m) != j_star
        sig[others] = zeta * sig[others] + np.abs(w[others]) * k[others]
        age[others] = zeta * age[others]
        if abs(w_old) > 0.0:
            sig[j_star] = (abs(w_new) / abs(w_old)) * zeta * sig[j_star] + abs(w_new)
        else:
            sig[j_star] = zeta * sig[j_star] + abs(w_new)
        age[j_star] = zeta * age[j_star] + 1.0

    def significance_on_prune(self, removed, zeta, params):
        """Correct survivors after a removal.

        E_j <- E_j - |w_j| * age_removed * k(c_j, c_removed) (no zeta decay on
        the correction) and every surviving age re-accumulates as
        zeta*age + 1. Significances may go negative; they are not clamped.
        """
        if self._size == 0:
            raise StateError("significance_on_prune: dictionary emptied")
        m = self._size
        k = self._kernel_to(np.asarray(removed.center, dtype=float), params)
        self._sig[:m] -= np.abs(self._weights[:m]) * removed.age_accum * k
        self._age[:m] = zeta * self._age[:m] + 1.0

    def prune_min_significance(self, zeta, params):
        """Remove the minimum-significance entry when over budget.

        Returns (index, removed entry) when a prune fired, otherwise None.
        At or below budget (or without one) this is a no-op. Ties go to the
        lowest index. The survivor correction runs after the removal.
        """
        if self.budget is None or self._size <= self.budget:
            return None
        if self._size < 2:
            return None
        idx = int(np.argmin(self._sig[: self._size]))
        removed = DictionaryEntry(
            center=self._centers[idx].copy(),
            weight=float(self._weights[idx]),
            significance=float(self._sig[idx]),
            age_accum=float(self._age[idx]),
        )
        self._remove(idx)
        self.significance_on_prune(removed, zeta, params)
        return idx, removed

    def _remove(self, idx):
        self._check_index(idx)
        m = self._size
        self._centers[idx : m - 1] = self._centers[idx + 1 : m]
        self._weights[idx : m - 1] = self._weights[idx + 1 : m]
        self._sig[idx : m - 1] = self._sig[idx + 1 : m]
        self._age[idx : m - 1] = self._age[idx + 1 : m]
        self._size = m - 1

    def _check_index(self, idx):
        if not 0 <= idx < self._size:
            raise StateError(f"dictionary: index {idx} out of range for size {self._size}")

    def entries(self):
        """Snapshot of all entries, in order."""
        return [
            DictionaryEntry(
                center=self._centers[j].copy(),
                weight=float(self._weights[j]),
                significance=float(self._sig[j]),
                age_accum=float(self._age[j]),
            )
            for j in range(self._size)
        ]

    def to_json_dict(self, full=False):
        out = {"size": self._size, "budget": self.budget}
        if full:
            out["entries"] = [
                {
                    "center": [float(v) for v in self._centers[j]],
                    "weight": float(self._weights[j]),
                    "significance": float(self._sig[j]),
                    "age_accum": float(self._age[j]),
                }
                for j in range(self._size)
            ]
        return out
