"""Primitive element pairs with a prescribed trace in finite field extensions.

Decides, for a prime power q and degree n >= 3, whether every a in F_q
admits a primitive alpha in F_{q^n} with trace a whose partner
alpha + alpha^{-1} is also primitive.  Three escalating sufficient
criteria (basic, prime sieve, modified prime sieve) run on the exact
factorization of q^n - 1; character-sum counting validates the analytic
machinery on small fields; exhaustive and quartic-polynomial searches
settle the pairs the criteria leave open.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "Factorization": "primpair.intnum",
    "factorize": "primpair.intnum",
    "factor_group_order": "primpair.intnum",
    "FieldContext": "primpair.ffield",
    "FieldElement": "primpair.ffield",
    "build_field": "primpair.ffield",
    "least_primitive_root": "primpair.ffield",
    "is_primitive_polynomial": "primpair.ffield",
    "SievePlan": "primpair.sieve",
    "CriterionReport": "primpair.sieve",
    "bc_check": "primpair.sieve",
    "psc_check": "primpair.sieve",
    "mpsc_check": "primpair.sieve",
    "optimize_plan": "primpair.sieve",
    "VerificationResult": "primpair.verifier",
    "verify_exhaustive": "primpair.verifier",
    "verify_quartic_prime": "primpair.verifier",
    "verify_quartic_primepower": "primpair.verifier",
    "check_witness": "primpair.verifier",
}

__all__ = ["__version__", *_EXPORTS]


def __getattr__(name):
    mod = _EXPORTS.get(name)
    if mod is None:
        raise AttributeError(f"module 'primpair' has no attribute {name!r}")
    import importlib

    return getattr(importlib.import_module(mod), name)
