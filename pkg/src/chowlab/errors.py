"""Exception hierarchy shared by every chowlab module."""


class ChowlabError(Exception):
    """Base class for all chowlab errors."""

    kind = "error"

    def payload(self):
        return {"kind": self.kind, "message": str(self)}


class StructuralError(ChowlabError, ValueError):
    """Malformed or mismatched input (alphabets, truncations, shapes, specs)."""

    kind = "structural"


class DegeneracyError(ChowlabError, ArithmeticError):
    """A leading coefficient or a pairing matrix that must be nonzero is not."""

    kind = "degenerate"

    def __init__(self, message, **data):
        super().__init__(message)
        self.data = data

    def payload(self):
        out = {"kind": self.kind}
        out.update(self.data)
        out["message"] = str(self)
        return out


class InvariantViolation(ChowlabError, RuntimeError):
    """An internal certificate failed (e.g. a Chern-number matrix lost rank)."""

    kind = "invariant"


class OracleNotStandard(ChowlabError):
    """The evaluation oracle is not the evaluation of any standard cycle."""

    kind = "not-standard"


class MissingQueries(StructuralError):
    """An oracle table lacks entries that decoding needs."""

    kind = "missing-queries"

    def __init__(self, specs):
        self.specs = list(specs)
        super().__init__("oracle is missing %d variet%s: %s" % (
            len(self.specs), "y" if len(self.specs) == 1 else "ies",
            ", ".join(self.specs)))

    def payload(self):
        return {"kind": self.kind, "missing": self.specs, "message": str(self)}
