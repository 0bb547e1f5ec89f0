"""
ERRORES - Taxonomia de errores del toolkit
==========================================
Cada clase lleva el estado que el CLI reporta y su codigo de salida:

    ok                    -> 0
    domain-error          -> 2
    resource-error        -> 3
    convergence-error     -> 4
    verification-failure  -> 5
"""


class KleinError(Exception):
    """Base de todos los errores esperados del toolkit."""

    status = "domain-error"
    exit_code = 2

    def detalles(self):
        """Datos extra (serializables a JSON) que acompanan al error."""
        return {}


class DomainError(KleinError, ValueError):
    """Entrada fuera del dominio de la operacion (tipo invalido, indice fuera de rango...)."""

    status = "domain-error"
    exit_code = 2


class BudgetExceeded(KleinError, RuntimeError):
    """La busqueda exhaustiva supero el presupuesto de nodos."""

    status = "resource-error"
    exit_code = 3

    def __init__(self, mensaje, partial_count=0, nodes=0):
        super().__init__(mensaje)
        self.partial_count = partial_count
        self.nodes = nodes

    def detalles(self):
        return {"partial_count": self.partial_count, "nodes": self.nodes}


class ConvergenceError(KleinError, RuntimeError):
    """El solver agoto iteraciones (o paso) sin bajar el residuo de la tolerancia."""

    status = "convergence-error"
    exit_code = 4

    def __init__(self, mensaje, best=None, residual=float("inf"), iterations=0):
        super().__init__(mensaje)
        self.best = best
        self.residual = residual
        self.iterations = iterations

    def detalles(self):
        return {"residual": self.residual, "iterations": self.iterations}


class VerificationFailure(KleinError, RuntimeError):
    """Un certificado numerico no paso la tolerancia (indica un bug)."""

    status = "verification-failure"
    exit_code = 5

    def __init__(self, mensaje, residual=float("inf"), tolerance=0.0):
        super().__init__(mensaje)
        self.residual = residual
        self.tolerance = tolerance

    def detalles(self):
        return {"residual": self.residual, "tolerance": self.tolerance}
