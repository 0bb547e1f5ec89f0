"""
GRUPOS - Grupos finitamente presentados con aumentacion a Z/2Z
==============================================================
Palabras libres, presentaciones y presentaciones aumentadas (con un
morfismo sobreyectivo a Z/2Z), que modelan la sucesion exacta

    1 -> pi_1(X;x) -> pi_1^R((X,sigma);x) -> Z/2Z -> 1

Incluye:
  - constructores de los grupos de superficie, esfera pinchada y recta
    real pinchada, y del producto semidirecto por una involucion
  - Reidemeister-Schreier para el nucleo de indice 2 (transversal {1, t})
  - invariantes de la abelianizacion via forma normal de Smith

No hay solucionador general del problema de la palabra: la igualdad se
decide solo por reduccion libre o a traves de una accion/representacion.

Convencion de letras: el generador i (base 0) se escribe +(i+1) y su
inverso -(i+1).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from errores import DomainError

log = logging.getLogger(__name__)


# ============================================================
# PALABRAS
# ============================================================

@dataclass(frozen=True)
class Word:
    """Palabra libremente reducida; letters es una tupla de enteros +-(i+1)."""

    letters: tuple = ()

    def __post_init__(self):
        letras = tuple(self.letters)
        for x in letras:
            if not isinstance(x, int) or isinstance(x, bool) or x == 0:
                raise DomainError(f"letra invalida: {x!r}")
        for x, y in zip(letras, letras[1:]):
            if x == -y:
                raise DomainError(f"palabra no reducida: {letras}")
        object.__setattr__(self, "letters", letras)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other):
        return reduce_word(self.letters + tuple(other))

    def inverse(self):
        return Word(tuple(-x for x in reversed(self.letters)))

    def max_index(self):
        """Mayor indice de generador usado (base 0), o -1 si es vacia."""
        return max((abs(x) - 1 for x in self.letters), default=-1)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"g{abs(x)}" + ("^-1" if x < 0 else "") for x in self.letters)


EMPTY = Word()


def letter_index(x):
    return abs(x) - 1


def reduce_word(raw, generator_count=None):
    """
    Reduccion libre de una secuencia de letras.

    Args:
        raw: Word o iterable de enteros +-(i+1)
        generator_count: si se da, valida que cada indice sea < generator_count

    Returns:
        Word reducida (idempotente, nunca mas larga que raw)
    """
    pila = []
    for x in raw:
        if not isinstance(x, int) or isinstance(x, bool) or x == 0:
            raise DomainError(f"letra invalida: {x!r}")
        if generator_count is not None and abs(x) > generator_count:
            raise DomainError(f"indice de generador {abs(x) - 1} fuera de rango (hay {generator_count})")
        if pila and pila[-1] == -x:
            pila.pop()
        else:
            pila.append(x)
    return Word(tuple(pila))


def substitute(w, images):
    """Homomorfismo de grupos libres: reemplaza el generador i por images[i]."""
    salida = []
    for x in w:
        imagen = images[letter_index(x)]
        salida.extend(imagen.letters if x > 0 else imagen.inverse().letters)
    return reduce_word(salida)


# ============================================================
# PRESENTACIONES
# ============================================================

@dataclass(frozen=True)
class Presentation:
    """Presentacion <g_1..g_n | relatores> con relatores reducidos y no vacios."""

    generator_count: int
    relators: tuple = ()
    generator_names: tuple = None

    def __post_init__(self):
        n = self.generator_count
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise DomainError(f"generator_count debe ser un entero positivo (recibido {n!r})")
        relatores = tuple(reduce_word(r, n) for r in self.relators)
        if any(len(r) == 0 for r in relatores):
            raise DomainError("los relatores deben ser no vacios tras la reduccion libre")
        object.__setattr__(self, "relators", relatores)
        if self.generator_names is not None:
            nombres = tuple(str(x) for x in self.generator_names)
            if len(nombres) != n:
                raise DomainError(f"se esperaban {n} nombres de generadores, hay {len(nombres)}")
            object.__setattr__(self, "generator_names", nombres)

    @property
    def names(self):
        return self.generator_names or tuple(f"g{i + 1}" for i in range(self.generator_count))

    def check_word(self, w):
        if w.max_index() >= self.generator_count:
            raise DomainError(f"la palabra usa el generador {w.max_index()}, la presentacion tiene {self.generator_count}")


@dataclass(frozen=True)
class AugmentedPresentation:
    """Presentacion con un morfismo sobreyectivo a Z/2Z dado en los generadores."""

    base: Presentation
    augmentation: tuple

    def __post_init__(self):
        aug = tuple(self.augmentation)
        if len(aug) != self.base.generator_count:
            raise DomainError(f"la aumentacion tiene {len(aug)} valores para {self.base.generator_count} generadores")
        if any(v not in (0, 1) or isinstance(v, bool) for v in aug):
            raise DomainError(f"la aumentacion toma valores en {{0,1}}: {aug}")
        object.__setattr__(self, "augmentation", aug)
        for r in self.base.relators:
            if augmentation_of_word(self, r) != 0:
                raise DomainError(f"el relator {r} tiene aumentacion 1: la aumentacion no esta bien definida")
        if 1 not in aug:
            raise DomainError("aumentacion no sobreyectiva: ningun generador va a 1")

    @property
    def generator_count(self):
        return self.base.generator_count

    @property
    def relators(self):
        return self.base.relators

    @property
    def names(self):
        return self.base.names


def augmentation_of_word(ap, w):
    """Imagen de w en Z/2Z (los signos no importan mod 2)."""
    ap.base.check_word(w)
    return sum(ap.augmentation[letter_index(x)] for x in w) % 2


def default_lift(ap):
    """Levantamiento por defecto de sigma: el generador "s" si va a 1, si no el primero que va a 1."""
    nombres = ap.names
    if "s" in nombres and ap.augmentation[nombres.index("s")] == 1:
        return Word((nombres.index("s") + 1,))
    return Word((ap.augmentation.index(1) + 1,))


# ============================================================
# CONSTRUCTORES
# ============================================================

def free_group(r):
    if r < 1:
        raise DomainError(f"el rango del grupo libre debe ser >= 1 (recibido {r})")
    return Presentation(r, ())


def surface_group(g):
    """<a1,b1,...,ag,bg | prod [ai,bi]>; g=0 da el grupo trivial <g1 | g1>."""
    if g < 0:
        raise DomainError(f"genero negativo: {g}")
    if g == 0:
        return Presentation(1, ((1,),), ("g1",))
    relator = []
    nombres = []
    for i in range(1, g + 1):
        a, b = 2 * i - 1, 2 * i
        relator += [a, b, -a, -b]
        nombres += [f"a{i}", f"b{i}"]
    return Presentation(2 * g, (tuple(relator),), tuple(nombres))


def punctured_sphere_group(n):
    """<a1..an | a1 a2 ... an>, grupo fundamental de la esfera menos n puntos."""
    if n < 2:
        raise DomainError(f"se necesitan al menos 2 pinchazos (recibido {n})")
    return Presentation(n, (tuple(range(1, n + 1)),), tuple(f"a{i}" for i in range(1, n + 1)))


def real_punctured_line_group(n):
    """<b1..bn | bi^2> con cada bi enviado al elemento no trivial de Z/2Z."""
    if n < 2:
        raise DomainError(f"se necesitan al menos 2 pinchazos (recibido {n})")
    base = Presentation(n, tuple((i, i) for i in range(1, n + 1)), tuple(f"b{i}" for i in range(1, n + 1)))
    return AugmentedPresentation(base, (1,) * n)


def nonorientable_surface_group(h):
    """
    <c1..ch | c1^2 ... ch^2> aumentado por el caracter de orientacion (cada ci -> 1).

    Es el grupo fundamental real de una curva sin puntos reales de tipo
    (h-1, 0, 1): el cociente es la suma conexa de h planos proyectivos y el
    nucleo es el grupo de superficie de genero h-1 del doble.
    """
    if h < 1:
        raise DomainError(f"se necesita al menos un plano proyectivo (recibido {h})")
    relator = tuple(x for i in range(1, h + 1) for x in (i, i))
    base = Presentation(h, (relator,), tuple(f"c{i}" for i in range(1, h + 1)))
    return AugmentedPresentation(base, (1,) * h)


def semidirect_with_involution(p, action):
    """
    Producto semidirecto p x| Z/2Z = <p, s | rel(p), s^2, s action(gi) s^-1 gi^-1>.

    Args:
        p: Presentation
        action: secuencia (o dict indice -> Word) con la imagen de cada generador

    La involutividad se comprueba solo a nivel libre: action(action(gi))
    debe reducirse literalmente a gi.
    """
    n = p.generator_count
    if isinstance(action, dict):
        faltan = [i for i in range(n) if i not in action]
        if faltan:
            raise DomainError(f"la accion no define la imagen de los generadores {faltan}")
        action = [action[i] for i in range(n)]
    imagenes = [reduce_word(w, n) for w in action]
    if len(imagenes) != n:
        raise DomainError(f"la accion tiene {len(imagenes)} imagenes para {n} generadores")

    for i, w in enumerate(imagenes):
        if substitute(w, imagenes) != Word((i + 1,)):
            raise DomainError(f"action not involutive at free level (generador {p.names[i]})")

    s = n + 1
    relatores = list(p.relators) + [(s, s)]
    for i, w in enumerate(imagenes):
        r = reduce_word((s,) + w.letters + (-s, -(i + 1)))
        if len(r):
            relatores.append(r)
    base = Presentation(n + 1, tuple(relatores), p.names + ("s",))
    return AugmentedPresentation(base, (0,) * n + (1,))


# ============================================================
# REIDEMEISTER-SCHREIER (INDICE 2)
# ============================================================

@dataclass(frozen=True)
class KernelPresentation:
    """
    Presentacion del nucleo de la aumentacion.

    Se desempaqueta como (presentation, generator_words, transversal_rep).
    schreier_images[c*n + x] expresa el generador de Schreier (coclase c,
    generador x) en los generadores finales del nucleo.
    """

    presentation: Presentation
    generator_words: tuple
    transversal_rep: Word
    schreier_images: tuple

    def __iter__(self):
        return iter((self.presentation, self.generator_words, self.transversal_rep))


def _palabra_schreier(ap, t, coclase, x):
    """rep(c) * x * rep(c*x)^-1 como palabra en los generadores de ap."""
    rep = {0: (), 1: (t + 1,)}
    destino = (coclase + ap.augmentation[x]) % 2
    return reduce_word(rep[coclase] + (x + 1,) + tuple(-y for y in reversed(rep[destino])))


def _reescribir_crudo(ap, t, w, coclase=0):
    """Reescribe w en generadores de Schreier crudos (ids c*n+x); omite el trivial (0, t)."""
    n = ap.generator_count
    trivial = t
    salida = []
    for letra in w:
        x = letter_index(letra)
        if letra > 0:
            gid = coclase * n + x
            coclase = (coclase + ap.augmentation[x]) % 2
            if gid != trivial:
                salida.append(gid + 1)
        else:
            coclase = (coclase + ap.augmentation[x]) % 2
            gid = coclase * n + x
            if gid != trivial:
                salida.append(-(gid + 1))
    return salida, coclase


def _sustituir_id(w, gid, valor):
    salida = []
    for letra in w:
        if letter_index(letra) == gid:
            salida.extend(valor.letters if letra > 0 else valor.inverse().letters)
        else:
            salida.append(letra)
    return reduce_word(salida)


def _tietze_ligero(relatores, valores):
    """Elimina generadores usando relatores de longitud 1 o 2 (y_i^e y_j^f con i != j)."""
    while True:
        vistos = []
        for r in relatores:
            if len(r) and r not in vistos:
                vistos.append(r)
        relatores = vistos

        eliminado = None
        for r in relatores:
            if len(r) == 1:
                eliminado = (letter_index(r.letters[0]), EMPTY)
                break
        if eliminado is None:
            for r in relatores:
                if len(r) == 2 and letter_index(r.letters[0]) != letter_index(r.letters[1]):
                    l1, l2 = r.letters
                    # l1 l2 = 1: se elimina el generador de id mayor
                    if letter_index(l1) > letter_index(l2):
                        eliminado = (letter_index(l1), Word((-l2,)) if l1 > 0 else Word((l2,)))
                    else:
                        eliminado = (letter_index(l2), Word((-l1,)) if l2 > 0 else Word((l1,)))
                    break
        if eliminado is None:
            return relatores, valores

        gid, valor = eliminado
        relatores = [_sustituir_id(r, gid, valor) for r in relatores]
        valores = {k: _sustituir_id(v, gid, valor) for k, v in valores.items()}


@lru_cache(maxsize=128)
def kernel_presentation(ap):
    """
    Reidemeister-Schreier para ker(aumentacion), transversal {1, t}.

    t es el primer generador con aumentacion 1. Los generadores de Schreier
    son rep(c) x rep(c x)^-1 para c en {0,1}; los relatores son las
    reescrituras de cada relator desde ambas coclases. Una pasada de Tietze
    ligera elimina redundancias de longitud <= 2.

    Returns:
        KernelPresentation (desempaquetable como (presentation, generator_words, transversal_rep))
    """
    if 1 not in ap.augmentation:
        raise DomainError("aumentacion no sobreyectiva: no hay generador con aumentacion 1")
    n = ap.generator_count
    t = ap.augmentation.index(1)

    vivos = [gid for gid in range(2 * n) if gid != t]
    valores = {gid: Word((gid + 1,)) for gid in vivos}
    relatores = []
    for r in ap.relators:
        for coclase in (0, 1):
            crudo, final = _reescribir_crudo(ap, t, r, coclase)
            if final != coclase:
                raise DomainError(f"el relator {r} no esta en el nucleo")
            relatores.append(reduce_word(crudo))
    log.debug("[KERNEL] %d generadores de Schreier, %d relatores crudos", len(vivos), len(relatores))

    relatores, valores = _tietze_ligero(relatores, valores)
    sobrevivientes = [g for g in vivos if valores[g] == Word((g + 1,))]
    nuevo = {gid: i + 1 for i, gid in enumerate(sobrevivientes)}

    def _renumerar(w):
        return Word(tuple(nuevo[letter_index(x)] * (1 if x > 0 else -1) for x in w))

    imagenes = []
    for gid in range(2 * n):
        imagenes.append(_renumerar(valores[gid]) if gid in valores else EMPTY)

    palabras = tuple(_palabra_schreier(ap, t, gid // n, gid % n) for gid in sobrevivientes)
    nombres = tuple(f"y{i + 1}" for i in range(len(sobrevivientes)))
    rels = tuple(_renumerar(r) for r in relatores)
    if not sobrevivientes:
        # Nucleo trivial: misma convencion que surface_group(0)
        presentacion = Presentation(1, ((1,),), ("y1",))
        palabras = (EMPTY,)
    else:
        presentacion = Presentation(len(sobrevivientes), rels, nombres)
    log.debug("[KERNEL] tras Tietze: %d generadores, %d relatores",
              presentacion.generator_count, len(presentacion.relators))
    return KernelPresentation(presentacion, palabras, Word((t + 1,)), tuple(imagenes))


def rewrite_in_kernel(ap, w):
    """Expresa una palabra de aumentacion 0 en los generadores de kernel_presentation(ap)."""
    if augmentation_of_word(ap, w) != 0:
        raise DomainError(f"word not in kernel: {w} tiene aumentacion 1")
    nucleo = kernel_presentation(ap)
    t = letter_index(nucleo.transversal_rep.letters[0])
    crudo, _ = _reescribir_crudo(ap, t, w, 0)
    return substitute(reduce_word(crudo), nucleo.schreier_images)


def outer_automorphism_on_kernel(ap, sigma_word):
    """Imagen de cada generador del nucleo por Ad_sigma^-1: f -> sigma^-1 f sigma, reescrita en el nucleo."""
    if augmentation_of_word(ap, sigma_word) != 1:
        raise DomainError("sigma_word debe tener aumentacion 1")
    nucleo = kernel_presentation(ap)
    return tuple(
        rewrite_in_kernel(ap, sigma_word.inverse() * w * sigma_word)
        for w in nucleo.generator_words
    )


# ============================================================
# ABELIANIZACION
# ============================================================

def abelianization_invariants(p):
    """
    Forma normal de Smith de la matriz de sumas de exponentes.

    Returns:
        (free_rank, torsion) con torsion en orden de divisibilidad
    """
    n = p.generator_count
    if not p.relators:
        return n, []
    filas = []
    for r in p.relators:
        fila = [0] * n
        for x in r:
            fila[letter_index(x)] += 1 if x > 0 else -1
        filas.append([ZZ(v) for v in fila])
    matriz = DomainMatrix(filas, (len(filas), n), ZZ)
    no_nulos = [abs(int(d)) for d in invariant_factors(matriz) if int(d) != 0]
    torsion = sorted(d for d in no_nulos if d > 1)
    return n - len(no_nulos), torsion
