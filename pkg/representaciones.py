"""
REPRESENTACIONES - Variedades de representaciones unitarias
===========================================================
Representaciones de presentaciones (aumentadas) en U(n) y en el producto
semidirecto U(n) x|_alpha Z/2Z, donde la estructura real alpha sobre C^n
es v -> C conj(v) con C unitaria y C conj(C) = I.

Ley del producto semidirecto:

    (U, e) . (V, f) = (U . Ad^[e](V), e f)
    Ad^[-1](V) = C conj(V) C^-1,   Ad^[+1](V) = V

Flujo principal:
  1. solve_rep / solve_augmented_rep: descenso de gradiente en U(n)^m
     (gradiente euclideo -> proyeccion tangente -> retraccion polar)
  2. restrict_rep: el mapa Phi (restriccion al nucleo de la aumentacion)
  3. kappa: la involucion [chi] -> [Ad_alpha o chi o Ad_sigma^-1]
  4. verify_fix_kappa: certifica kappa(chi) = Ad_W o chi con W = U_s^-1
  5. conjugator_search: decide numericamente si dos reps son conjugadas

El elemento alpha se normaliza al par (I, -1). Tolerancias en norma de
Frobenius: resolver 1e-8, certificar 1e-6, unitariedad 1e-10.
"""
import logging
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.linalg import polar, qr, svd

import config
from errores import ConvergenceError, DomainError, VerificationFailure
from grupos import (
    AugmentedPresentation,
    Presentation,
    Word,
    augmentation_of_word,
    default_lift,
    kernel_presentation,
    letter_index,
    reduce_word,
    rewrite_in_kernel,
)

log = logging.getLogger(__name__)


# ============================================================
# UTILIDADES DE MATRICES
# ============================================================

def _adj(M):
    return M.conj().T


def _proyectar_unitaria(M):
    """Proyeccion polar al grupo unitario (factor unitario de M = U P)."""
    U, _ = polar(M)
    return U


def _congelar(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _frob(M):
    return float(np.linalg.norm(M, "fro"))


def random_unitary(n, rng):
    """Unitaria aleatoria (Haar) por QR de una matriz gaussiana con correccion de fases."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


# ============================================================
# ESTRUCTURA REAL
# ============================================================

@dataclass(frozen=True, eq=False)
class RealStructureMatrix:
    """Matriz C de la estructura real alpha(v) = C conj(v)."""

    C: np.ndarray

    def __post_init__(self):
        C = np.array(self.C, dtype=complex)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
            raise DomainError(f"C debe ser cuadrada y no vacia (forma {C.shape})")
        I = np.eye(C.shape[0])
        if _frob(C @ _adj(C) - I) > 100 * config.UNITARY_TOL:
            raise DomainError("C no es unitaria")
        if _frob(C @ C.conj() - I) > 100 * config.UNITARY_TOL:
            raise DomainError("C conj(C) != I: alpha no es una involucion")
        object.__setattr__(self, "C", _congelar(C))

    @property
    def dimension(self):
        return self.C.shape[0]

    def ad(self, M):
        """Ad_alpha(M) = C conj(M) C^-1."""
        return self.C @ M.conj() @ _adj(self.C)

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))


def random_real_structure(n, seed):
    """C = Q Q^T para Q unitaria aleatoria: toda estructura real es conjugada a la conjugacion compleja."""
    Q = random_unitary(n, np.random.default_rng(seed))
    return RealStructureMatrix(Q @ Q.T)


def _como_estructura(C, n=None):
    if C is None:
        if n is None:
            raise DomainError("falta la estructura real")
        return RealStructureMatrix.identity(n)
    if isinstance(C, RealStructureMatrix):
        return C
    return RealStructureMatrix(C)


# ============================================================
# CADENAS DE FACTORES (evaluacion y gradiente)
# ============================================================

def _cadena(w, signos=None):
    """
    Factores de la parte matricial de w: lista de (indice, adjunta, torcida).

    Una letra x en signo acumulado s aporta Ad^[s](U_x); una letra x^-1
    aporta Ad^[s e_x](U_x^*). Devuelve tambien el signo final.
    """
    s = 1
    factores = []
    for x in w:
        i = letter_index(x)
        e = signos[i] if signos is not None else 1
        if x > 0:
            factores.append((i, False, s == -1))
        else:
            factores.append((i, True, s * e == -1))
        s *= e
    return factores, s


def _factor(U, C, i, adjunta, torcida):
    M = _adj(U[i]) if adjunta else U[i]
    if torcida:
        M = C @ M.conj() @ _adj(C)
    return M


def _producto(U, C, factores, n):
    P = np.eye(n, dtype=complex)
    for i, adjunta, torcida in factores:
        P = P @ _factor(U, C, i, adjunta, torcida)
    return P


class _Problema:
    """Objetivo sum_r ||rho(r) - I||_F^2 sobre U(n)^m y su gradiente."""

    def __init__(self, relators, n, m, signos=None, C=None):
        self.n = n
        self.m = m
        self.C = C
        self.cadenas = []
        for r in relators:
            factores, signo = _cadena(r, signos)
            if signo != 1:
                raise DomainError(f"el relator {r} tiene signo -1")
            self.cadenas.append(factores)

    def residuo(self, U):
        if not self.cadenas:
            return 0.0
        I = np.eye(self.n)
        return max(_frob(_producto(U, self.C, f, self.n) - I) for f in self.cadenas)

    def objetivo(self, U):
        I = np.eye(self.n)
        return sum(_frob(_producto(U, self.C, f, self.n) - I) ** 2 for f in self.cadenas)

    def gradiente(self, U):
        """Gradiente euclideo G (df = Re tr(G^* dU)) de cada generador."""
        n = self.n
        G = np.zeros((self.m, n, n), dtype=complex)
        for factores in self.cadenas:
            mats = [_factor(U, self.C, *f) for f in factores]
            prefijos = [np.eye(n, dtype=complex)]
            for M in mats:
                prefijos.append(prefijos[-1] @ M)
            sufijos = [np.eye(n, dtype=complex)]
            for M in reversed(mats):
                sufijos.append(M @ sufijos[-1])
            sufijos.reverse()
            E_adj = _adj(prefijos[-1] - np.eye(n))
            for j, (i, adjunta, torcida) in enumerate(factores):
                A = 2 * sufijos[j + 1] @ E_adj @ prefijos[j]
                if not torcida:
                    G[i] += A if adjunta else _adj(A)
                else:
                    B = _adj(self.C) @ A @ self.C
                    G[i] += B.conj() if adjunta else B.T
        return G

    def gradiente_tangente(self, U):
        """Proyeccion al espacio tangente: U skew(U^* G)."""
        G = self.gradiente(U)
        xi = np.empty_like(G)
        for i in range(self.m):
            X = _adj(U[i]) @ G[i]
            xi[i] = U[i] @ (X - _adj(X)) / 2
        return xi


# ============================================================
# TIPOS DE REPRESENTACION
# ============================================================

@dataclass(frozen=True, eq=False)
class UnitaryRep:
    """Asignacion generador -> matriz unitaria n x n, con su residuo de relatores."""

    presentation: Presentation
    matrices: np.ndarray
    residual: float = None

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[1] < 1:
            raise DomainError(f"se esperaban matrices cuadradas no vacias (forma {mats.shape})")
        if mats.shape[0] != self.presentation.generator_count:
            raise DomainError(f"hay {mats.shape[0]} matrices para {self.presentation.generator_count} generadores")
        mats = np.stack([_proyectar_unitaria(M) for M in mats])
        object.__setattr__(self, "matrices", _congelar(mats))
        if self.residual is None:
            object.__setattr__(self, "residual", relator_residual(self))

    @property
    def dimension(self):
        return self.matrices.shape[1]

    def _problema(self):
        return _Problema(self.presentation.relators, self.dimension, self.presentation.generator_count)


@dataclass(frozen=True, eq=False)
class AugmentedUnitaryRep:
    """Asignacion generador -> (U, e) en U(n) x|_alpha Z/2Z con e = (-1)^aumentacion."""

    presentation: AugmentedPresentation
    real_structure: RealStructureMatrix
    matrices: np.ndarray
    signs: tuple = None
    residual: float = None

    def __post_init__(self):
        ap = self.presentation
        esperados = tuple(-1 if a else 1 for a in ap.augmentation)
        if self.signs is not None and tuple(self.signs) != esperados:
            raise DomainError(f"los signos {tuple(self.signs)} no coinciden con la aumentacion {esperados}")
        object.__setattr__(self, "signs", esperados)
        C = _como_estructura(self.real_structure)
        object.__setattr__(self, "real_structure", C)
        mats = np.array(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] != ap.generator_count or mats.shape[1:] != (C.dimension, C.dimension):
            raise DomainError(f"forma de matrices {mats.shape} incompatible con {ap.generator_count} generadores "
                              f"y dimension {C.dimension}")
        mats = np.stack([_proyectar_unitaria(M) for M in mats])
        object.__setattr__(self, "matrices", _congelar(mats))
        if self.residual is None:
            object.__setattr__(self, "residual", relator_residual(self))

    @property
    def dimension(self):
        return self.matrices.shape[1]

    def _problema(self):
        return _Problema(self.presentation.relators, self.dimension, self.presentation.generator_count,
                         self.signs, self.real_structure.C)


@dataclass(frozen=True, eq=False)
class Certificate:
    W: np.ndarray
    residual: float
    tolerance: float
    passed: bool


# ============================================================
# EVALUACION
# ============================================================

def evaluate_word_matrix(rep, w):
    """
    Imagen de la palabra w.

    Returns:
        matriz para UnitaryRep; par (matriz, signo) para AugmentedUnitaryRep
    """
    if w.max_index() >= rep.matrices.shape[0]:
        raise DomainError(f"la palabra usa el generador {w.max_index()}, la rep tiene {rep.matrices.shape[0]}")
    if isinstance(rep, AugmentedUnitaryRep):
        factores, signo = _cadena(w, rep.signs)
        return _producto(rep.matrices, rep.real_structure.C, factores, rep.dimension), signo
    factores, _ = _cadena(w)
    return _producto(rep.matrices, None, factores, rep.dimension)


def relator_residual(rep):
    """max_r ||rho(r) - I||_F (0 sin relatores; +inf si algun relator tiene signo -1)."""
    residuo = 0.0
    I = np.eye(rep.matrices.shape[1])
    for r in rep.presentation.relators:
        imagen = evaluate_word_matrix(rep, r)
        if isinstance(rep, AugmentedUnitaryRep):
            imagen, signo = imagen
            if signo != 1:
                return float("inf")
        residuo = max(residuo, _frob(imagen - I))
    return residuo


def objective_and_gradient(presentation, matrices, real_structure=None):
    """
    Objetivo del solver y su gradiente riemanniano (vectores tangentes U_i Omega_i).

    Args:
        presentation: Presentation o AugmentedPresentation
        matrices: array (m, n, n) de unitarias
        real_structure: C (solo para presentaciones aumentadas; identidad por defecto)
    """
    U = np.array(matrices, dtype=complex)
    n, m = U.shape[1], U.shape[0]
    if isinstance(presentation, AugmentedPresentation):
        C = _como_estructura(real_structure, n)
        signos = tuple(-1 if a else 1 for a in presentation.augmentation)
        problema = _Problema(presentation.relators, n, m, signos, C.C)
    else:
        problema = _Problema(presentation.relators, n, m)
    return problema.objetivo(U), problema.gradiente_tangente(U)


# ============================================================
# SOLVER
# ============================================================

@dataclass(frozen=True)
class SolveOptions:
    tol: float = field(default_factory=lambda: config.SOLVE_TOL)
    max_iter: int = field(default_factory=lambda: config.MAX_ITER)
    step: float = field(default_factory=lambda: config.INITIAL_STEP)
    min_step: float = field(default_factory=lambda: config.MIN_STEP)


def _descenso(problema, U, opts):
    """
    Descenso de gradiente riemanniano con retraccion polar.

    El paso se reduce a la mitad mientras el objetivo no baje y se duplica
    (hasta opts.step) tras cada paso aceptado.

    Returns:
        (matrices, iteraciones, residuo)
    """
    f = problema.objetivo(U)
    paso = opts.step
    mejor = (U, problema.residuo(U))
    for iteracion in range(opts.max_iter + 1):
        residuo = problema.residuo(U)
        if residuo < mejor[1]:
            mejor = (U, residuo)
        if residuo < opts.tol:
            log.debug("[SOLVER] convergio en %d iteraciones (residuo %.3e)", iteracion, residuo)
            return U, iteracion, residuo
        if iteracion == opts.max_iter:
            break
        xi = problema.gradiente_tangente(U)
        while True:
            candidato = np.stack([_proyectar_unitaria(U[i] - paso * xi[i]) for i in range(len(U))])
            f_nuevo = problema.objetivo(candidato)
            if f_nuevo < f:
                break
            paso /= 2
            if paso < opts.min_step:
                raise ConvergenceError(
                    f"paso minimo alcanzado en la iteracion {iteracion} con residuo {mejor[1]:.3e}",
                    best=mejor[0], residual=mejor[1], iterations=iteracion,
                )
        U, f = candidato, f_nuevo
        paso = min(2 * paso, opts.step)
        if iteracion % 1000 == 0:
            log.debug("[SOLVER] iteracion %d: objetivo %.3e, paso %.2e", iteracion, f, paso)
    raise ConvergenceError(
        f"{opts.max_iter} iteraciones sin alcanzar tol={opts.tol:.1e} (mejor residuo {mejor[1]:.3e})",
        best=mejor[0], residual=mejor[1], iterations=opts.max_iter,
    )


def _inicial(m, n, seed):
    rng = np.random.default_rng(seed)
    return np.stack([random_unitary(n, rng) for _ in range(m)])


def solve_rep(p, n, seed=0, opts=None):
    """
    Busca una representacion p -> U(n) con residuo < opts.tol.

    Descenso de gradiente riemanniano con retraccion polar. El paso se
    divide a la mitad hasta que el objetivo baja; tras cada paso aceptado
    se duplica, con tope opts.step. Se detiene con ConvergenceError si el
    paso cae bajo opts.min_step o se agotan opts.max_iter iteraciones.

    Determinista por semilla. Lanza ConvergenceError (con el mejor iterado
    como UnitaryRep en .best) si no converge.
    """
    if n < 1:
        raise DomainError(f"dimension invalida: {n}")
    opts = opts or SolveOptions()
    problema = _Problema(p.relators, n, p.generator_count)
    try:
        U, _, residuo = _descenso(problema, _inicial(p.generator_count, n, seed), opts)
    except ConvergenceError as e:
        e.best = UnitaryRep(p, e.best)
        raise
    return UnitaryRep(p, U, residuo)


def solve_augmented_rep(ap, n, C=None, seed=0, opts=None):
    """Como solve_rep, con signos fijados por la aumentacion y evaluacion semidirecta."""
    if n < 1:
        raise DomainError(f"dimension invalida: {n}")
    C = _como_estructura(C, n)
    if C.dimension != n:
        raise DomainError(f"la estructura real tiene dimension {C.dimension}, se pidio {n}")
    opts = opts or SolveOptions()
    signos = tuple(-1 if a else 1 for a in ap.augmentation)
    problema = _Problema(ap.relators, n, ap.generator_count, signos, C.C)
    try:
        U, _, residuo = _descenso(problema, _inicial(ap.generator_count, n, seed), opts)
    except ConvergenceError as e:
        e.best = AugmentedUnitaryRep(ap, C, e.best)
        raise
    return AugmentedUnitaryRep(ap, C, U, residual=residuo)


# ============================================================
# RESTRICCION, INVOLUCION KAPPA Y CERTIFICADOS
# ============================================================

def restrict_rep(augrep):
    """Phi: restriccion al nucleo de la aumentacion (todas las imagenes con signo +1)."""
    nucleo = kernel_presentation(augrep.presentation)
    matrices = []
    for w in nucleo.generator_words:
        M, signo = evaluate_word_matrix(augrep, w)
        if signo != 1:
            raise DomainError(f"la palabra del nucleo {w} tiene signo -1")
        matrices.append(M)
    return UnitaryRep(nucleo.presentation, np.stack(matrices))


def _exigir_rep_del_nucleo(chi, ap):
    nucleo = kernel_presentation(ap)
    if chi.presentation != nucleo.presentation:
        raise DomainError("chi no es una representacion de la presentacion del nucleo")
    return nucleo


def outer_action(chi, ap, sigma_word):
    """chi o Ad_sigma^-1: f -> chi(sigma^-1 f sigma), sin torcer por alpha."""
    if augmentation_of_word(ap, sigma_word) != 1:
        raise DomainError("sigma_word debe tener aumentacion 1")
    nucleo = _exigir_rep_del_nucleo(chi, ap)
    matrices = [
        evaluate_word_matrix(chi, rewrite_in_kernel(ap, sigma_word.inverse() * w * sigma_word))
        for w in nucleo.generator_words
    ]
    return UnitaryRep(nucleo.presentation, np.stack(matrices))


def kappa(chi, ap, C=None, sigma_word=None):
    """kappa(chi)(f) = C conj(chi(sigma^-1 f sigma)) C^-1, con sigma^-1 f sigma reescrita en el nucleo."""
    sigma_word = default_lift(ap) if sigma_word is None else sigma_word
    C = _como_estructura(C, chi.dimension)
    if C.dimension != chi.dimension:
        raise DomainError(f"dimension de C ({C.dimension}) distinta de la de chi ({chi.dimension})")
    torcida = outer_action(chi, ap, sigma_word)
    matrices = np.stack([C.ad(M) for M in torcida.matrices])
    return UnitaryRep(torcida.presentation, matrices)


def conjugate_rep(chi, W):
    """Ad_W o chi."""
    W = np.asarray(W, dtype=complex)
    if W.shape != (chi.dimension, chi.dimension):
        raise DomainError(f"W tiene forma {W.shape}, la representacion tiene dimension {chi.dimension}")
    return UnitaryRep(chi.presentation, np.stack([W @ M @ _adj(W) for M in chi.matrices]))


def _residuo_entrelazador(chi1, chi2, W):
    return max((_frob(W @ A @ _adj(W) - B) for A, B in zip(chi1.matrices, chi2.matrices)), default=0.0)


def _palabras_cortas(m, longitud):
    letras = [i for g in range(1, m + 1) for i in (g, -g)]
    vistas = set()
    for k in range(1, longitud + 1):
        for tupla in product(letras, repeat=k):
            w = reduce_word(tupla)
            if len(w) == k and w not in vistas:
                vistas.add(w)
                yield w


def conjugator_search(chi1, chi2, tol=None):
    """
    Busca W unitaria con W chi1(g) W^-1 = chi2(g) para todo generador g.

    Pre-test de trazas en palabras de longitud <= 3; luego el sistema
    lineal chi2(g) W = W chi1(g), su nucleo numerico por SVD y proyeccion
    polar de cada candidato. Para reps reducibles, None no prueba que no
    sean conjugadas.

    Returns:
        W (ndarray) o None
    """
    tol = config.CERTIFY_TOL if tol is None else tol
    if chi1.presentation != chi2.presentation:
        raise DomainError("las representaciones son de presentaciones distintas")
    if chi1.dimension != chi2.dimension:
        raise DomainError(f"dimensiones distintas: {chi1.dimension} y {chi2.dimension}")
    n, m = chi1.dimension, chi1.matrices.shape[0]

    umbral_traza = max(config.TRACE_TOL, 10 * tol)
    for w in _palabras_cortas(m, 3):
        t1 = np.trace(evaluate_word_matrix(chi1, w))
        t2 = np.trace(evaluate_word_matrix(chi2, w))
        if abs(t1 - t2) > umbral_traza:
            log.debug("[CONJ] trazas distintas en %s: %.3e", w, abs(t1 - t2))
            return None

    # vec(A X B) = (B^T kron A) vec(X), vec por columnas
    I = np.eye(n)
    sistema = np.vstack([np.kron(I, B) - np.kron(A.T, I) for A, B in zip(chi1.matrices, chi2.matrices)])
    _, valores, Vh = svd(sistema)
    valores = np.concatenate([valores, np.zeros(n * n - len(valores))])
    orden = np.argsort(valores)
    nulos = [Vh[j].conj() for j in orden if valores[j] < 1e-3] or [Vh[orden[0]].conj()]
    candidatos = list(nulos)
    if len(nulos) > 1:
        rng = np.random.default_rng(0)
        for _ in range(3):
            coef = rng.standard_normal(len(nulos)) + 1j * rng.standard_normal(len(nulos))
            candidatos.append(sum(c * v for c, v in zip(coef, nulos)))

    for v in candidatos:
        W = _proyectar_unitaria(v.reshape((n, n), order="F"))
        if _residuo_entrelazador(chi1, chi2, W) < tol:
            return W
    return None


def verify_fix_kappa(augrep, sigma_word=None, tol=None):
    """
    Certifica que Phi(rho) es un punto fijo de kappa.

    Con rho(sigma) = (U_s, -1), el conjugador alpha rho(sigma)^-1 es el par
    (U_s^-1, +1), asi que kappa(chi) = Ad_W o chi con W = U_s^-1.

    Returns:
        Certificate; lanza VerificationFailure si el residuo supera
        tol + 100 * residuo(rho)
    """
    tol = config.CERTIFY_TOL if tol is None else tol
    ap = augrep.presentation
    sigma_word = default_lift(ap) if sigma_word is None else sigma_word
    if augmentation_of_word(ap, sigma_word) != 1:
        raise DomainError("sigma_word debe tener aumentacion 1")
    chi = restrict_rep(augrep)
    kchi = kappa(chi, ap, augrep.real_structure, sigma_word)
    U_s, _ = evaluate_word_matrix(augrep, sigma_word)
    W = _adj(U_s)
    residuo = _residuo_entrelazador(chi, kchi, W)
    limite = tol + 100 * augrep.residual
    log.info("[CERT] residuo %.3e (limite %.3e)", residuo, limite)
    if not residuo < limite:
        raise VerificationFailure(f"kappa(chi) != Ad_W o chi: residuo {residuo:.3e} > {limite:.3e}",
                                  residual=residuo, tolerance=limite)
    return Certificate(_congelar(W), residuo, limite, True)
