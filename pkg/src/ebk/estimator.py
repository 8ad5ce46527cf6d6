"""scikit-learn style wrapper: fit builds and certifies a basis, transform expands states in it."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import construct, multipartite
from .validation import check_dims, check_k, check_state_matrix, n_amplitudes
from .verify import meets, verify_basis, verify_multipartite


class EntangledBasisTransformer(TransformerMixin, BaseEstimator):
    """Change of basis into an orthonormal basis of Schmidt-number-``k`` states.

    ``fit`` ignores its data apart from checking the row width; it generates
    the basis for ``dims`` and stores the verification report. ``transform``
    maps amplitude vectors (rows of ``X``) to their coefficients
    ``<psi_i|x>``; ``inverse_transform`` maps coefficients back.

    Parameters
    ----------
    dims : tuple of int
        Party dimensions, two or more.
    k : int
        Schmidt number of every basis state.
    family : {"ebk", "sebk", "meb", "pb"}
    isometry : {"dft", "od", "ud"} or Isometry, optional
        Coefficient source; the construction default when omitted.
    field : {"complex", "real"}
    """

    def __init__(self, dims=(2, 2), k=2, family="ebk", isometry=None, field="complex"):
        self.dims = dims
        self.k = k
        self.family = family
        self.isometry = isometry
        self.field = field

    def fit(self, X=None, y=None):
        dims = check_dims(self.dims)
        k = check_k(self.k, dims)
        if X is not None:
            check_state_matrix(X, n_amplitudes(dims))
        if len(dims) == 2:
            req = construct.ConstructionRequest(dims[0], dims[1], k, self.family, self.isometry, self.field)
            basis = construct.generate(req)
            report = verify_basis(basis)
            components = basis.vectors()
        else:
            basis = multipartite.generate_npartite(dims, k, self.family, self.isometry, self.field)
            report = verify_multipartite(basis)
            components = basis.tensors()
        self.basis_ = basis
        self.report_ = report
        self.classification_ = report.classification
        self.certified_ = meets(report.classification, basis.family)
        self.components_ = components
        self.n_features_in_ = components.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "components_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")

    def transform(self, X):
        self._check_fitted()
        x = check_state_matrix(X, self.n_features_in_)
        return x @ self.components_.conj().T

    def inverse_transform(self, C):
        self._check_fitted()
        c = check_state_matrix(C, self.components_.shape[0])
        return c @ self.components_

    def schmidt_numbers(self) -> np.ndarray:
        """Schmidt number (first-party cut) of every basis state, from the report."""
        self._check_fitted()
        return np.array([r.schmidt_number for r in self.report_.per_state])
