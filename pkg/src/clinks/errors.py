"""Exception types shared across the pipeline."""


class ClinksError(Exception):
    """Base class for all pipeline errors."""


class SolverDidNotConverge(ClinksError):
    pass


class DegenerateCurve(ClinksError):
    """The tangency determinant vanishes identically on the curve."""


class SingularPointOfCurve(ClinksError):
    """Both partial derivatives vanish at a point of the curve."""


class NonTransverseRadius(ClinksError):
    """The sphere radius is too close to a critical radius to trace safely."""


class StepCollapse(ClinksError):
    """Curvature forced the continuation step below its minimum."""


class ContactDegeneracy(ClinksError):
    """The contact form changes sign along a traced loop."""


class AtPole(ClinksError):
    """A point maps to the projection pole y = -r."""


class PushOffCollision(ClinksError):
    """The push-off offset is too large; the pushed link touches the original."""


class DegenerateCrossing(ClinksError):
    """Near-tangential intersection or triple point in a projected diagram."""


class TooLarge(ClinksError):
    """Input exceeds the exhaustive-search budget of an oracle."""


class NotSingleCrossing(ClinksError):
    """The chosen edge is not the unique crossing joining its two circles."""


class NoReducingFace(ClinksError):
    """No reducing face found although incompatible circles remain."""


class IterationCap(ClinksError):
    """A rewriting loop made no progress within its iteration budget."""


class ThetaViolation(ClinksError):
    """The sweep ledger's theta left zero: the primary correctness alarm."""


class DegenerateProjectionJet(ClinksError):
    """Second-order data of the projection vanishes at a critical point."""


class UnresolvedDiff(ClinksError):
    """Two diagrams differ by more than one combinatorial move."""
