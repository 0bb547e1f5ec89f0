"""
CUBRIENTES - Cubrientes finitos como acciones por permutaciones
===============================================================
Lado discreto de la correspondencia de Galois: un cubriente de grado n
es un pi-conjunto finito, es decir una permutacion de {0..n-1} por
generador tal que cada relator actua como la identidad.

  - conexo  <=> la accion es transitiva
  - Galois  <=> el estabilizador de un punto es normal (accion regular)

Para una presentacion aumentada, restringir la accion al nucleo da el
cubriente complejo subyacente al cubriente real; sus orbitas son las
componentes conexas.

Convencion (accion a la izquierda): la imagen de la palabra x1 x2 ... xk
es perm(x1) o perm(x2) o ... o perm(xk), es decir, primero actua xk.
"""
import logging
from dataclasses import dataclass
from itertools import permutations

import config
from errores import BudgetExceeded, DomainError
from grupos import Word, kernel_presentation, letter_index, reduce_word, augmentation_of_word, default_lift

log = logging.getLogger(__name__)


# ============================================================
# TIPO DE DATOS
# ============================================================

@dataclass(frozen=True, order=True)
class PermutationAction:
    """Una permutacion (en notacion de una linea) de {0..degree-1} por generador."""

    degree: int
    images: tuple

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise DomainError(f"el grado debe ser un entero positivo (recibido {self.degree!r})")
        imagenes = tuple(tuple(int(v) for v in p) for p in self.images)
        for p in imagenes:
            if sorted(p) != list(range(self.degree)):
                raise DomainError(f"{list(p)} no es una permutacion de 0..{self.degree - 1}")
        object.__setattr__(self, "images", imagenes)

    @property
    def generator_count(self):
        return len(self.images)


def _identidad(n):
    return tuple(range(n))


def _componer(f, g):
    """f o g (primero g)."""
    return tuple(f[i] for i in g)


def _inversa(f):
    inv = [0] * len(f)
    for i, v in enumerate(f):
        inv[v] = i
    return tuple(inv)


# ============================================================
# EVALUACION DE PALABRAS
# ============================================================

def _evaluar(images, w, n):
    resultado = _identidad(n)
    inversas = {}
    for x in w:
        i = letter_index(x)
        if x > 0:
            p = images[i]
        else:
            if i not in inversas:
                inversas[i] = _inversa(images[i])
            p = inversas[i]
        resultado = _componer(resultado, p)
    return resultado


def evaluate_word_perm(action, w):
    """Permutacion de la palabra w (monodromia a lo largo de w)."""
    if w.max_index() >= action.generator_count:
        raise DomainError(f"la palabra usa el generador {w.max_index()}, la accion tiene {action.generator_count}")
    return _evaluar(action.images, w, action.degree)


def satisfies_relators(p, action):
    if action.generator_count != p.generator_count:
        return False
    identidad = _identidad(action.degree)
    return all(evaluate_word_perm(action, r) == identidad for r in p.relators)


def action_from_images(p, images):
    """Construye una PermutationAction de p validando que cada relator actue trivialmente."""
    imagenes = [tuple(x) for x in images]
    if len(imagenes) != p.generator_count:
        raise DomainError(f"se esperaban {p.generator_count} permutaciones, hay {len(imagenes)}")
    grado = len(imagenes[0]) if imagenes else 0
    accion = PermutationAction(grado, tuple(imagenes))
    identidad = _identidad(grado)
    for r in p.relators:
        if evaluate_word_perm(accion, r) != identidad:
            raise DomainError(f"el relator {r} no actua como la identidad")
    return accion


# ============================================================
# ENUMERACION (BACKTRACKING)
# ============================================================

def _conjugar(images, sigma, sigma_inv):
    # (sigma g sigma^-1)[i] = sigma[g[sigma^-1[i]]]
    return tuple(tuple(sigma[g[sigma_inv[i]]] for i in range(len(sigma))) for g in images)


def _forma_canonica(images, n):
    """Representante lexicograficamente minimo de la clase de conjugacion simultanea."""
    mejor = images
    for sigma in permutations(range(n)):
        candidato = _conjugar(images, sigma, _inversa(sigma))
        if candidato < mejor:
            mejor = candidato
    return mejor


def conjugacy_orbit_size(action):
    """Numero de conjugados simultaneos distintos bajo Sym(n)."""
    n = action.degree
    return len({_conjugar(action.images, s, _inversa(s)) for s in permutations(range(n))})


def enumerate_actions(p, n, up_to_conjugacy=False, budget=None):
    """
    Todas las acciones de grado n de la presentacion p.

    Los generadores se rellenan en orden de indice y cada imagen recorre
    Sym(n) en orden lexicografico; un relator se comprueba en cuanto todos
    sus generadores tienen imagen. Con up_to_conjugacy se devuelve un
    representante minimo por clase de conjugacion simultanea.

    Args:
        p: Presentation
        n: grado
        up_to_conjugacy: deduplicar por conjugacion simultanea
        budget: maximo de nodos expandidos (por defecto config.SEARCH_BUDGET)

    Returns:
        lista de PermutationAction en orden lexicografico
    """
    if n < 1:
        raise DomainError(f"el grado debe ser positivo (recibido {n})")
    budget = config.SEARCH_BUDGET if budget is None else budget
    m = p.generator_count
    candidatos = list(permutations(range(n)))
    identidad = _identidad(n)

    # Relatores agrupados por el generador que los completa
    por_nivel = [[] for _ in range(m)]
    for r in p.relators:
        por_nivel[r.max_index()].append(r)

    encontrados = []
    nodos = 0
    asignacion = []

    def _relatores_ok(nivel):
        return all(_evaluar(asignacion, r, n) == identidad for r in por_nivel[nivel])

    def _buscar(nivel):
        nonlocal nodos
        if nivel == m:
            encontrados.append(tuple(asignacion))
            return
        for perm in candidatos:
            nodos += 1
            if nodos > budget:
                raise BudgetExceeded(
                    f"presupuesto de {budget} nodos agotado con {len(encontrados)} acciones encontradas",
                    partial_count=len(encontrados), nodes=nodos,
                )
            asignacion.append(perm)
            if _relatores_ok(nivel):
                _buscar(nivel + 1)
            asignacion.pop()

    _buscar(0)
    log.info("[COVERS] grado %d: %d acciones, %d nodos", n, len(encontrados), nodos)

    if up_to_conjugacy:
        representantes = sorted({_forma_canonica(imgs, n) for imgs in encontrados})
        return [PermutationAction(n, imgs) for imgs in representantes]
    return [PermutationAction(n, imgs) for imgs in encontrados]


# ============================================================
# ORBITAS, TRANSITIVIDAD, GALOIS
# ============================================================

def _union_find(action):
    padre = list(range(action.degree))

    def raiz(i):
        while padre[i] != i:
            padre[i] = padre[padre[i]]
            i = padre[i]
        return i

    for p in action.images:
        for i, j in enumerate(p):
            a, b = raiz(i), raiz(j)
            if a != b:
                padre[max(a, b)] = min(a, b)
    return [raiz(i) for i in range(action.degree)]


def orbit_decomposition(action):
    """Orbitas del grupo generado (componentes conexas del cubriente), ordenadas por su minimo."""
    bloques = {}
    for i, r in enumerate(_union_find(action)):
        bloques.setdefault(r, []).append(i)
    return sorted(bloques.values())


def is_transitive(action):
    return len(set(_union_find(action))) == 1


def stabilizer_schreier_generators(action, point):
    """
    Generadores de Schreier del estabilizador de point, como palabras.

    Arbol de Schreier en anchura: u_q lleva point a q, u_{x(q)} = x u_q.
    Cada generador es u_{x(q)}^-1 x u_q (se omiten los triviales).
    """
    if not is_transitive(action):
        raise DomainError("la accion no es transitiva")
    if not 0 <= point < action.degree:
        raise DomainError(f"punto fuera de rango: {point}")

    arbol = {point: Word()}
    cola = [point]
    while cola:
        q = cola.pop(0)
        for i, p in enumerate(action.images):
            destino = p[q]
            if destino not in arbol:
                arbol[destino] = reduce_word((i + 1,) + arbol[q].letters)
                cola.append(destino)

    generadores = []
    for q in sorted(arbol):
        for i, p in enumerate(action.images):
            w = arbol[p[q]].inverse() * Word((i + 1,)) * arbol[q]
            if len(w) and w not in generadores:
                generadores.append(w)
    return generadores


def is_galois(action):
    """Galois <=> el estabilizador de 0 coincide con el de cada punto (su imagen fija todo)."""
    if not is_transitive(action):
        raise DomainError("is_galois requiere una accion transitiva")
    identidad = _identidad(action.degree)
    return all(evaluate_word_perm(action, w) == identidad
               for w in stabilizer_schreier_generators(action, 0))


# ============================================================
# CUBRIENTES REALES
# ============================================================

def restrict_action_to_kernel(ap, action):
    """Accion del nucleo de la aumentacion: cada generador del nucleo actua por su palabra."""
    if not satisfies_relators(ap.base, action):
        raise DomainError("la accion no satisface los relatores de la presentacion aumentada")
    nucleo = kernel_presentation(ap)
    imagenes = tuple(evaluate_word_perm(action, w) for w in nucleo.generator_words)
    return PermutationAction(action.degree, imagenes)


def real_structure_on_components(ap, action, h_word=None):
    """
    Estructura real inducida sobre las componentes del cubriente complejo.

    h (aumentacion 1) envia cada orbita del nucleo a otra orbita del nucleo;
    el resultado es una involucion de las componentes, independiente de h.

    Returns:
        dict con 'components' (orbitas del nucleo), 'involution' (indice de la
        componente imagen de cada componente) y 'real_components' (las fijas)
    """
    h_word = default_lift(ap) if h_word is None else h_word
    if augmentation_of_word(ap, h_word) != 1:
        raise DomainError("h_word debe tener aumentacion 1")
    componentes = orbit_decomposition(restrict_action_to_kernel(ap, action))
    indice = {v: c for c, bloque in enumerate(componentes) for v in bloque}
    h = evaluate_word_perm(action, h_word)

    involucion = []
    for bloque in componentes:
        destinos = {indice[h[v]] for v in bloque}
        if len(destinos) != 1:
            raise DomainError("h no respeta las orbitas del nucleo (accion inconsistente)")
        involucion.append(destinos.pop())
    if any(involucion[involucion[c]] != c for c in range(len(componentes))):
        raise DomainError("la estructura inducida no es una involucion")
    return {
        "components": componentes,
        "involution": involucion,
        "real_components": [c for c, d in enumerate(involucion) if c == d],
    }
