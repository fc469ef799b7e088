"""Named input polynomials."""

from .errors import PolynomialSyntaxError

PRESETS = {
    # the five-variable cycle of squares whose quotient realizes the
    # 24-versus-54 gap certified by this toolkit
    "lu-counterexample": "x1^2*x2 + x2^2*x3 + x3^2*x4 + x4^2*x5 + x5^2*x1",
    # same degree and variables, trivial quotient: a useful control case
    "cubic-trivial-quotient": "x1^3 + x1^2*x2 + x1^2*x3 + x1^2*x4 + x1^2*x5",
}


def get_preset(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise PolynomialSyntaxError(
            f"unknown preset {name!r}; available presets: {known}"
        ) from None
