from typing import Dict, Optional


class CtxForgeError(Exception):
    """Base class for every error raised by ctxforge."""

    # constructor arguments, so errors survive the trip back from worker processes
    _init_args: Optional[tuple] = None

    def __reduce__(self):
        if self._init_args is None:
            return super().__reduce__()
        return (type(self), self._init_args)


# exact-expr
class ExprSyntaxError(CtxForgeError, ValueError):
    def __init__(self, message: str, source: str, position: int):
        super().__init__(f"{message} at position {position}: {source!r}")
        self._init_args = (message, source, position)
        self.source = source
        self.position = position


class DivisionByZero(CtxForgeError, ZeroDivisionError):
    pass


# linalg / shapes
class DimensionMismatch(CtxForgeError, ValueError):
    pass


class NotNormalized(CtxForgeError, ValueError):
    def __init__(self, norm: float, index: Optional[int] = None):
        where = "" if index is None else f" (vector {index})"
        super().__init__(f"Vector norm {norm:.12g} differs from 1{where}")
        self._init_args = (norm, index)
        self.norm = norm
        self.index = index


class NotHermitian(CtxForgeError, ValueError):
    pass


class ZeroProbabilityBranch(CtxForgeError, ValueError):
    def __init__(self, outcome: int, probability: float):
        super().__init__(f"Outcome {outcome} has probability {probability:.3g}")
        self._init_args = (outcome, probability)
        self.outcome = outcome
        self.probability = probability


class InvalidOutcome(CtxForgeError, ValueError):
    def __init__(self, outcome):
        super().__init__(f"Outcome must be 0 or 1, got {outcome!r}")
        self._init_args = (outcome,)
        self.outcome = outcome


# graphs
class IndexOutOfRange(CtxForgeError, IndexError):
    pass


class AmbiguousOverlap(CtxForgeError, ValueError):
    def __init__(self, i: int, j: int, overlap: float):
        super().__init__(f"|<v{i}|v{j}>| = {overlap:.3e} is inside the orthogonality guard band")
        self._init_args = (i, j, overlap)
        self.i = i
        self.j = j
        self.overlap = overlap


class TooLarge(CtxForgeError, ValueError):
    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds the bound {limit}")
        self._init_args = (what, size, limit)
        self.what = what
        self.size = size
        self.limit = limit


class OutputBudgetExceeded(CtxForgeError, RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"Enumeration exceeded the output budget of {budget} sets")
        self._init_args = (budget,)
        self.budget = budget


# solvers
class ConvergenceFailure(CtxForgeError, RuntimeError):
    def __init__(self, message: str, residuals: Optional[Dict[str, float]] = None):
        super().__init__(f"{message} (residuals: {residuals or {}})")
        self._init_args = (message, residuals)
        self.residuals = residuals or {}


class LPUnbounded(CtxForgeError, RuntimeError):
    pass


# ks-logic
class AdjacentEndpoints(CtxForgeError, ValueError):
    pass


# gadget-forge
class OutOfRange(CtxForgeError, ValueError):
    def __init__(self, overlap: float):
        super().__init__(f"No bug gadget realizes endpoint overlap {overlap:.6f}")
        self._init_args = (overlap,)
        self.overlap = overlap


class EndpointsParallelOrOrthogonal(CtxForgeError, ValueError):
    def __init__(self, overlap: float):
        super().__init__(f"Endpoint overlap {overlap:.6f} is 0 or 1; no gadget needed or possible")
        self._init_args = (overlap,)
        self.overlap = overlap


class UnsupportedGeometry(CtxForgeError, ValueError):
    pass


class BudgetExceeded(CtxForgeError, RuntimeError):
    def __init__(self, max_links: int, overlap: float):
        super().__init__(f"Chain between endpoints with overlap {overlap:.6f} needs more than {max_links} links")
        self._init_args = (max_links, overlap)
        self.max_links = max_links
        self.overlap = overlap


class Uncoverable(CtxForgeError, ValueError):
    pass


class NotSDC(CtxForgeError, ValueError):
    def __init__(self, diagnosis: str):
        super().__init__(f"Input cannot produce state-dependent contextuality: {diagnosis}")
        self._init_args = (diagnosis,)
        self.diagnosis = diagnosis


class ConstructionFailed(CtxForgeError, RuntimeError):
    pass


# sic-cert / ineq-engine
class WeightArityMismatch(CtxForgeError, ValueError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"Expected {expected} weights, got {got}")
        self._init_args = (expected, got)
        self.expected = expected
        self.got = got


# cli-io
class UnknownDataset(CtxForgeError, KeyError):
    def __init__(self, name: str, known):
        super().__init__(f"Unknown dataset {name!r}; known: {', '.join(known)}")
        self._init_args = (name, tuple(known))
        self.name = name
