"""Reference values produced outside the package.

ETA_ACTION comes from tests/oracles/freeze_eta.py (30-digit mpmath
integration of the zero-energy action, hbar = 1, 2m = 1, default entry
parameters).  Keys are catalog labels.
"""

ETA_ACTION = {
    "square-well[L=3.14159]": 1.0,
    "harmonic-1d[omega=1]": 0.5,
    "radial-ho[omega=1,l=0]": 0.75,
    "radial-ho[omega=1,l=1]": 0.5428932188134524756,
    "coulomb[q=2,l=0]": 1.0,
    "coulomb[q=2,l=1]": 0.5857864376269049512,
    "morse[A=12,alpha=0.25]": 0.5,
    "poschl-teller[A=6,alpha=1]": 0.48074069840786023097,
}

# 1 / (sigma sqrt(2 pi)) at sigma = 0.05
GAUSS_PEAK_005 = 7.978845608028654
