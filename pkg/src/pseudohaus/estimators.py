"""scikit-learn style wrappers.

``Pseudospectrum`` is fitted on a square matrix and then answers questions
about points of the complex plane; points are passed either as a complex
vector or as an ``(k, 2)`` array of ``[re, im]`` rows, the latter being the
usual sklearn ``X`` shape.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .convergence import equivalence_report
from .levelsets import DEFAULT_NODES, GridSpec, bounding_radius, evaluate_field, field_values, sublevel
from .validation import check_eps_list, check_matrix, check_points, check_positive


class Pseudospectrum(TransformerMixin, BaseEstimator):
    """Lower-norm field and eps-pseudospectrum of one matrix.

    ``fit`` evaluates the field on a square grid (of half-width ``radius``,
    or ``|A| + eps`` when ``radius`` is None) and stores the sampled region.
    ``transform`` gives exact field values at new points and ``predict``
    their membership in the strict (or closed) sublevel set.
    """

    def __init__(self, eps=0.5, closedness="strict", nodes=DEFAULT_NODES, radius=None, center=0.0):
        self.eps = eps
        self.closedness = closedness
        self.nodes = nodes
        self.radius = radius
        self.center = center

    def fit(self, X, y=None):
        a = check_matrix(X, square=True, name="X")
        eps = check_positive(self.eps, "eps")
        radius = self.radius if self.radius is not None else bounding_radius(a, eps)
        self.matrix_ = a
        self.grid_ = GridSpec.square(check_positive(radius, "radius"), self.nodes, complex(self.center))
        self.field_ = evaluate_field(a, self.grid_)
        self.region_ = sublevel(self.field_, eps, self.closedness)
        return self

    def transform(self, X):
        check_is_fitted(self, "field_")
        return field_values(self.matrix_, check_points(X, "X"))

    def predict(self, X):
        f = self.transform(X)
        return f < self.eps if self.closedness == "strict" else f <= self.eps

    def region(self):
        check_is_fitted(self, "region_")
        return self.region_


class ConvergenceDiagnostic(BaseEstimator):
    """Runs :func:`equivalence_report` for a sequence against a target.

    ``fit(seq, target)`` stores ``report_`` and ``verdict_``.  ``grid`` may be
    a :class:`GridSpec`; by default a shared grid is derived from the norms.
    """

    def __init__(self, eps_list=(0.2, 0.5, 1.0), n_list=(1, 2, 4, 8), sample_points=None, grid=None):
        self.eps_list = eps_list
        self.n_list = n_list
        self.sample_points = sample_points
        self.grid = grid

    def fit(self, X, y=None):
        eps = check_eps_list(self.eps_list)
        self.report_ = equivalence_report(X, y, eps, list(self.n_list), self.sample_points, self.grid)
        self.verdict_ = self.report_.verdict
        return self

    def predict(self, X=None):
        check_is_fitted(self, "report_")
        return np.asarray(self.report_.dh)
