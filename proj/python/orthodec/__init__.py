"""Martingale plus coboundary splitting of linear random fields on Z^d."""

import json as _json

from . import _core
from ._core import (
    InputError,
    holder_threshold,
    luxemburg_psi,
    moment_ratio_exact,
    rademacher_sum_norm,
    rho,
    simulate,
    vc_index,
    covering_number,
)

__version__ = _core.__version__


def element(d, terms):
    """Chaos element as a dict; `terms` maps index tuples to coefficients."""
    return {"d": d, "entries": [{"index": list(k), "coeff": float(v)} for k, v in sorted(terms.items())]}


def decompose(elem):
    return _json.loads(_core.decompose(_json.dumps(elem)))


def reconstruct(dec):
    return _json.loads(_core.reconstruct(_json.dumps(dec)))


def omd_verify(dec):
    return _json.loads(_core.omd_verify(_json.dumps(dec)))


def l2_norm(elem):
    return _core.l2_norm(_json.dumps(elem))


def series_condition(elem, axis=1, p=2.0, law="rademacher", algebra="shifted_past"):
    return _json.loads(_core.series_condition(_json.dumps(elem), axis, p, law, algebra))


def ks_gaussian(sample, target_variance):
    return _json.loads(_core.ks_gaussian(list(map(float, sample)), target_variance))


__all__ = [
    "InputError",
    "covering_number",
    "decompose",
    "element",
    "holder_threshold",
    "ks_gaussian",
    "l2_norm",
    "luxemburg_psi",
    "moment_ratio_exact",
    "omd_verify",
    "rademacher_sum_norm",
    "reconstruct",
    "rho",
    "series_condition",
    "simulate",
    "vc_index",
]
