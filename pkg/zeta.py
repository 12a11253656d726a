"""
Zeta functions of digraphs and the Ihara zeta function of regular graphs.

Z_D(u) = det(I - u A_D)^-1 is assembled from the eigenvalue multiset of A_D.
Poles u = 1/lambda are mapped to the s-plane through u = k^-s, i.e.
s = ln(lambda) / ln(k) on the principal branch. The Ihara zeta function of a
(k+1)-regular graph is the digraph zeta function of its non-backtracking
line digraph.
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from pydantic import BaseModel, Field, field_validator

import version
from config import config
from constructions import line_digraph
from digraph import Digraph, DigraphError, UGraph
from spectral import (Disconnected, classify_spectrum, eigenvalues_dense, multiset_distance,
                      ramanujan_graph_test)

logger = logging.getLogger(__name__)

INTEGER_SNAP = 1e-6
IHARA_MATCH_TOL = 1e-6


class DegenerateBase(DigraphError):
    """The s-map u = k^-s needs k >= 2."""


class ZetaRecord(BaseModel):
    """Versioned JSON form of a ZetaReport."""

    schema_version: str = Field(default_factory=lambda: str(version.record_schema()))
    n: int
    k: int
    reciprocal_poly: List[float]
    integer_poly: Optional[List[int]]
    poles: List[Tuple[float, float]]
    s_points: Optional[List[Tuple[float, float]]]
    rh_digraph: bool
    literal_rh: Optional[bool]
    negative_re_s: Optional[int]
    rh_ihara: Optional[bool] = None
    ihara_mismatch: Optional[float] = None

    @field_validator("schema_version")
    @classmethod
    def _readable(cls, value: str) -> str:
        return str(version.check_record_version(value))


@dataclass
class ZetaReport:
    """
    Reciprocal polynomial det(I - uA) (ascending coefficients), poles and verdicts.

    ``literal_rh`` applies the reading "Re s = 1 or 0 <= Re s <= 1/2"; it
    disagrees with ``rh_digraph`` exactly when some eigenvalue has
    0 < |lambda| < 1 (counted in ``negative_re_s``).
    """

    n: int
    k: int
    eigenvalues: np.ndarray
    reciprocal_poly: np.ndarray
    integer_poly: Optional[List[int]]
    poles: np.ndarray
    s_points: Optional[np.ndarray]
    rh_digraph: bool
    literal_rh: Optional[bool]
    negative_re_s: Optional[int]
    rh_ihara: Optional[bool] = None
    ihara_mismatch: Optional[float] = None

    def to_record(self) -> ZetaRecord:
        return ZetaRecord(
            n=self.n, k=self.k,
            reciprocal_poly=[float(c) for c in self.reciprocal_poly],
            integer_poly=self.integer_poly,
            poles=[(float(u.real), float(u.imag)) for u in self.poles],
            s_points=None if self.s_points is None else [(float(s.real), float(s.imag)) for s in self.s_points],
            rh_digraph=self.rh_digraph, literal_rh=self.literal_rh, negative_re_s=self.negative_re_s,
            rh_ihara=self.rh_ihara, ihara_mismatch=self.ihara_mismatch,
        )

    def s_plane_rows(self) -> List[Tuple[float, float, float, float]]:
        """CSV rows ``re_s,im_s,re_u,im_u``."""
        if self.s_points is None:
            raise DegenerateBase(f"k={self.k}: no s-plane for base 1")
        return [(float(s.real), float(s.imag), float(u.real), float(u.imag))
                for s, u in zip(self.s_points, self.poles)]


def reciprocal_polynomial(eigenvalues: np.ndarray) -> Tuple[np.ndarray, Optional[List[int]]]:
    """
    Ascending coefficients of prod (1 - u lambda) over the nonzero eigenvalues.

    Returns:
        (coefficients, integer coefficients when every drift is below 1e-6, else None)
    """
    nonzero = eigenvalues[eigenvalues != 0]
    # conjugate pairs make the coefficients real
    coeffs = np.real(np.poly(nonzero)) if len(nonzero) else np.ones(1)
    rounded = np.round(coeffs)
    if np.abs(coeffs - rounded).max() < INTEGER_SNAP:
        return coeffs, [int(c) for c in rounded]
    return coeffs, None


def s_map(values: np.ndarray, k: int) -> np.ndarray:
    """s = ln(lambda) / ln(k), principal branch, so Im s lies in (-pi/ln k, pi/ln k]."""
    if k < 2:
        raise DegenerateBase(f"Base k={k} has no logarithm map")
    return np.log(np.asarray(values, dtype=complex)) / math.log(k)


def zeta_digraph(D: Digraph, tolerance: Optional[float] = None,
                 eigenvalues: Optional[np.ndarray] = None) -> ZetaReport:
    """
    Zeta function data of a regular digraph.

    rh_digraph holds iff every pole has |lambda| = k or |lambda| <= sqrt(k),
    which is the Ramanujan condition restated on poles.

    Raises:
        TooLarge: If n exceeds the dense threshold
    """
    tol = config.TOLERANCE if tolerance is None else tolerance
    values = eigenvalues_dense(D) if eigenvalues is None else np.asarray(eigenvalues, dtype=complex)
    values = np.asarray(values, dtype=complex)
    nonzero = values[values != 0]
    coeffs, integer_poly = reciprocal_polynomial(values)
    poles = 1 / nonzero

    moduli = np.abs(nonzero)
    on_circle_k = np.abs(moduli - D.k) <= config.TRIVIAL_MATCH_TOL * D.k
    inside = moduli <= math.sqrt(D.k) * (1 + tol) + tol
    rh = bool(np.all(on_circle_k | inside))

    s_points = literal = negative = None
    if D.k >= 2:
        s_points = s_map(nonzero, D.k)
        re_s = s_points.real
        rh_tol = config.RH_TOLERANCE
        literal = bool(np.all((np.abs(re_s - 1) <= rh_tol) | ((re_s >= -rh_tol) & (re_s <= 0.5 + rh_tol))))
        negative = int(np.sum(re_s < -rh_tol))

    return ZetaReport(n=D.n, k=D.k, eigenvalues=values, reciprocal_poly=coeffs, integer_poly=integer_poly,
                      poles=poles, s_points=s_points, rh_digraph=rh, literal_rh=literal, negative_re_s=negative)


def ihara_bass_prediction(G: UGraph) -> np.ndarray:
    """
    Spectrum of the non-backtracking operator predicted from Spec(G).

    Each eigenvalue lambda of G contributes the roots of mu^2 - lambda mu + k;
    the factor (1 - u^2)^(|E| - |V|) contributes |E| - |V| copies each of +1 and -1.
    """
    k = G.k - 1
    lam = la.eigvalsh(G.dense()).astype(complex)
    disc = np.sqrt(lam ** 2 - 4 * k)
    tail = G.edge_count() - G.n
    return np.concatenate([(lam + disc) / 2, (lam - disc) / 2, np.ones(tail), -np.ones(tail)])


def zeta_ihara(G: UGraph, tolerance: Optional[float] = None) -> ZetaReport:
    """
    Ihara zeta data of a connected simple (k+1)-regular graph via its Hashimoto operator.

    rh_ihara holds iff every pole with 0 < Re s < 1 has Re s = 1/2.

    Raises:
        DegenerateBase: If k < 2
        Disconnected: If G is not connected
        HasLoopOrMultiEdge: If G is not simple
    """
    if G.k < 3:
        raise DegenerateBase(f"Degree {G.k} gives base k={G.k - 1}; need k >= 2")
    if not G.is_connected():
        raise Disconnected(f"{G!r} is not connected")
    D, _ = line_digraph(G)
    report = zeta_digraph(D, tolerance)

    rh_tol = config.RH_TOLERANCE
    re_s = report.s_points.real
    strip = (re_s > rh_tol) & (re_s < 1 - rh_tol)
    report.rh_ihara = bool(np.all(np.abs(re_s[strip] - 0.5) <= rh_tol))

    report.ihara_mismatch = multiset_distance(ihara_bass_prediction(G), report.eigenvalues)
    if report.ihara_mismatch > IHARA_MATCH_TOL:
        logger.warning(f"Ihara-Bass prediction off by {report.ihara_mismatch:.3e} for {G!r}")
    return report


class RHEntry(BaseModel):
    name: str
    kind: str
    rh: Optional[bool] = None
    ramanujan: Optional[bool] = None
    agree: Optional[bool] = None
    skipped: Optional[str] = None
    ihara_mismatch: Optional[float] = None


class RHSuiteReport(BaseModel):
    """Zeta-side versus spectrum-side verdicts over a corpus."""

    schema_version: str = Field(default_factory=lambda: str(version.record_schema()))
    entries: List[RHEntry] = Field(default_factory=list)

    @property
    def mismatches(self) -> List[RHEntry]:
        return [e for e in self.entries if e.agree is False]

    @property
    def checked(self) -> int:
        return sum(1 for e in self.entries if e.agree is not None)


def rh_equivalence_suite(digraphs: Sequence[Tuple[str, Digraph]],
                         graphs: Sequence[Tuple[str, UGraph]] = (),
                         tolerance: Optional[float] = None) -> RHSuiteReport:
    """
    Compare pole-side Riemann hypothesis verdicts with direct Ramanujan tests.

    Graphs of degree 2 are skipped: their line digraphs have k = 1.
    """
    report = RHSuiteReport()
    for name, D in digraphs:
        values = eigenvalues_dense(D)
        rh = zeta_digraph(D, tolerance, eigenvalues=values).rh_digraph
        ramanujan = classify_spectrum(D, tolerance, eigenvalues=values).ramanujan
        report.entries.append(RHEntry(name=name, kind="digraph", rh=rh, ramanujan=ramanujan, agree=rh == ramanujan))

    for name, G in graphs:
        if G.k < 3:
            report.entries.append(RHEntry(name=name, kind="graph",
                                          skipped=f"degree {G.k}: line digraph has k = {G.k - 1} < 2"))
            continue
        zeta = zeta_ihara(G, tolerance)
        ramanujan = ramanujan_graph_test(G, tolerance).ramanujan
        agree = zeta.rh_ihara == ramanujan and zeta.ihara_mismatch <= IHARA_MATCH_TOL
        report.entries.append(RHEntry(name=name, kind="graph", rh=zeta.rh_ihara, ramanujan=ramanujan,
                                      agree=agree, ihara_mismatch=zeta.ihara_mismatch))

    for entry in report.mismatches:
        logger.warning(f"RH mismatch on {entry.name}: rh={entry.rh}, ramanujan={entry.ramanujan}")
    logger.info(f"RH suite: {report.checked} checked, {len(report.mismatches)} mismatches")
    return report
