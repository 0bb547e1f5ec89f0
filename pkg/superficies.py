"""
SUPERFICIES - Tipos topologicos de superficies de Riemann reales
================================================================
Clasificacion combinatoria de superficies de Riemann reales compactas
(Sigma, tau) por su tipo topologico (g, k, a):

  g : genero de Sigma
  k : numero de circulos de puntos reales Fix(tau)
  a : 0 si Sigma - Fix(tau) es disconexa (dividing), 1 si es conexa

Convencion: a=0 significa "dividing". Existe en la literatura la
convencion opuesta; aqui se fija esta.

Tambien convierte un tipo en su superficie cociente Sigma/tau (compacta,
con borde) y de vuelta mediante la construccion del doble. Todo es
puramente combinatorio: no hay triangulaciones ni cartas.
"""
from dataclasses import dataclass

from errores import DomainError


# ============================================================
# TIPOS DE DATOS
# ============================================================

@dataclass(frozen=True, order=True)
class TopologicalType:
    """Triple (g, k, a) que clasifica una superficie de Riemann real compacta."""

    g: int
    k: int
    a: int

    def __post_init__(self):
        for nombre in ("g", "k"):
            valor = getattr(self, nombre)
            if not isinstance(valor, int) or isinstance(valor, bool) or valor < 0:
                raise DomainError(f"{nombre} debe ser un entero no negativo (recibido {valor!r})")
        if self.a not in (0, 1) or isinstance(self.a, bool):
            raise DomainError(f"a debe ser 0 o 1 (recibido {self.a!r})")


@dataclass(frozen=True)
class CompactSurface:
    """
    Superficie compacta conexa con borde, descrita por
    (orientable, handles_or_crosscaps, boundary).

    handles_or_crosscaps es el genero si es orientable y el numero de
    planos proyectivos de la suma conexa si no lo es.
    """

    orientable: bool
    handles_or_crosscaps: int
    boundary: int

    def __post_init__(self):
        if not isinstance(self.orientable, bool):
            raise DomainError("orientable debe ser booleano")
        for nombre in ("handles_or_crosscaps", "boundary"):
            valor = getattr(self, nombre)
            if not isinstance(valor, int) or isinstance(valor, bool) or valor < 0:
                raise DomainError(f"{nombre} debe ser un entero no negativo (recibido {valor!r})")
        if not self.orientable and self.handles_or_crosscaps < 1:
            raise DomainError("una superficie no orientable necesita al menos un plano proyectivo")


# ============================================================
# CLASIFICACION (Weichold / Harnack)
# ============================================================

def weichold_violation(t):
    """Devuelve la condicion de Weichold violada por t, o None si t es valido."""
    if t.k > t.g + 1:
        return f"Harnack: k={t.k} excede g+1={t.g + 1}"
    if t.a == 0:
        if t.k < 1:
            return "dividing (a=0) requiere k >= 1"
        if (t.k - (t.g + 1)) % 2 != 0:
            return f"dividing (a=0) requiere k = g+1 (mod 2); k={t.k}, g={t.g}"
    elif t.k > t.g:
        return f"non-dividing (a=1) requiere k <= g; k={t.k}, g={t.g}"
    return None


def weichold_valid(t):
    """Predicado total: True si el triple cumple las condiciones de Weichold."""
    return weichold_violation(t) is None


def _exigir_valido(t):
    motivo = weichold_violation(t)
    if motivo:
        raise DomainError(f"Tipo topologico invalido ({t.g},{t.k},{t.a}): {motivo}")


def enumerate_topological_types(g):
    """
    Todos los tipos topologicos validos de genero g, ordenados por (a, k).

    Returns:
        lista de TopologicalType de longitud floor((3g+4)/2)
    """
    if g < 0:
        raise DomainError(f"genero negativo: {g}")
    tipos = []
    for a in (0, 1):
        for k in range(g + 2):
            t = TopologicalType(g, k, a)
            if weichold_valid(t):
                tipos.append(t)
    return tipos


def count_topological_types(g):
    """Numero de tipos topologicos de genero g: floor((3g+4)/2)."""
    if g < 0:
        raise DomainError(f"genero negativo: {g}")
    return (3 * g + 4) // 2


def is_maximal_curve(t):
    """M-curva: k = g+1 (solo posible con a=0)."""
    _exigir_valido(t)
    return t.k == t.g + 1


def betti_sums(t):
    """
    Sumas de numeros de Betti mod 2.

    Returns:
        (total de Fix(tau), total de Sigma) = (2k, 2g+2). Coinciden
        exactamente para las M-curvas.
    """
    _exigir_valido(t)
    return 2 * t.k, 2 * t.g + 2


# ============================================================
# COCIENTE Y DOBLE
# ============================================================

def euler_characteristic(s):
    if s.orientable:
        return 2 - 2 * s.handles_or_crosscaps - s.boundary
    return 2 - s.handles_or_crosscaps - s.boundary


def quotient_surface(t):
    """
    Superficie cociente Sigma/tau de un tipo valido.

    a=0 -> orientable con (g+1-k)/2 asas y k circulos de borde.
    a=1 -> no orientable con g+1-k planos proyectivos y k circulos de borde.
    En ambos casos chi = 1 - g.
    """
    _exigir_valido(t)
    if t.a == 0:
        return CompactSurface(True, (t.g + 1 - t.k) // 2, t.k)
    return CompactSurface(False, t.g + 1 - t.k, t.k)


def double_surface(s):
    """
    Tipo topologico del doble de una superficie compacta con borde.

    Orientable (g^, r) -> (2g^ + r - 1, r, 0); requiere r >= 1.
    No orientable (h, l) -> (h + l - 1, l, 1): con m = 1 o 2 segun la
    paridad de h y g^' = (h - m)/2, el genero es 2g^' + (l + m) - 1 y el
    conjunto fijo tiene l circulos (no l + m).
    """
    if s.orientable:
        if s.boundary == 0:
            raise DomainError("disconnected double: una superficie orientable cerrada tiene doble disconexo")
        return TopologicalType(2 * s.handles_or_crosscaps + s.boundary - 1, s.boundary, 0)

    h, l = s.handles_or_crosscaps, s.boundary
    m = 1 if h % 2 else 2
    genero_orientable = (h - m) // 2
    return TopologicalType(2 * genero_orientable + (l + m) - 1, l, 1)


def connected_sum(s1, s2):
    """Suma conexa: chi(S1 # S2) = chi(S1) + chi(S2) - 2; los bordes se suman."""
    borde = s1.boundary + s2.boundary
    if s1.orientable and s2.orientable:
        return CompactSurface(True, s1.handles_or_crosscaps + s2.handles_or_crosscaps, borde)

    def _crosscaps(s):
        # Un asa junto a un plano proyectivo equivale a dos planos proyectivos
        return 2 * s.handles_or_crosscaps if s.orientable else s.handles_or_crosscaps

    return CompactSurface(False, _crosscaps(s1) + _crosscaps(s2), borde)


def describe_surface(s):
    """Nombre legible de la superficie (para identificar Sigma/tau en genero bajo)."""
    n, r = s.handles_or_crosscaps, s.boundary
    if s.orientable:
        nombres = {(0, 0): "sphere", (0, 1): "disc", (0, 2): "annulus", (1, 0): "torus"}
        if (n, r) in nombres:
            return nombres[(n, r)]
        if n == 0:
            return f"sphere minus {r} discs"
        return f"orientable surface of genus {n} with {r} boundary circles"

    nombres = {(1, 0): "projective plane", (1, 1): "Mobius band", (2, 0): "Klein bottle"}
    if (n, r) in nombres:
        return nombres[(n, r)]
    return f"connected sum of {n} projective planes with {r} boundary circles"
