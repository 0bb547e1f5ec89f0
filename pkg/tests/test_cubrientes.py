import random
from itertools import permutations

import pytest

from cubrientes import (
    PermutationAction,
    action_from_images,
    conjugacy_orbit_size,
    enumerate_actions,
    evaluate_word_perm,
    is_galois,
    is_transitive,
    orbit_decomposition,
    real_structure_on_components,
    restrict_action_to_kernel,
    satisfies_relators,
    stabilizer_schreier_generators,
)
from errores import BudgetExceeded, DomainError
from grupos import (
    EMPTY,
    Presentation,
    Word,
    augmentation_of_word,
    free_group,
    kernel_presentation,
    nonorientable_surface_group,
    real_punctured_line_group,
    reduce_word,
    rewrite_in_kernel,
    semidirect_with_involution,
    substitute,
    surface_group,
)

SWAP = (1, 0)
ID2 = (0, 1)


def _transitiva_por_fuerza_bruta(imagenes, n):
    vistos, frontera = {0}, [0]
    while frontera:
        q = frontera.pop()
        for p in imagenes:
            if p[q] not in vistos:
                vistos.add(p[q])
                frontera.append(p[q])
    return len(vistos) == n


# ============================================================
# EVALUACION
# ============================================================

def test_evaluacion_accion_a_la_izquierda():
    # x1 x2 actua como perm(x1) o perm(x2): primero x2
    a = PermutationAction(3, ((1, 0, 2), (0, 2, 1)))
    assert evaluate_word_perm(a, Word((1, 2))) == (1, 2, 0)
    assert evaluate_word_perm(a, Word((2, 1))) == (2, 0, 1)
    assert evaluate_word_perm(a, EMPTY) == (0, 1, 2)


def test_permutacion_invalida():
    with pytest.raises(DomainError):
        PermutationAction(2, ((0, 0),))


def test_accion_desde_imagenes_valida_relatores():
    p = Presentation(1, ((1, 1),))
    assert action_from_images(p, [SWAP]).images == (SWAP,)
    with pytest.raises(DomainError):
        action_from_images(p, [(1, 2, 0)])


# ============================================================
# ENUMERACION
# ============================================================

@pytest.mark.parametrize("r, n", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_enumeracion_completa_del_grupo_libre(r, n):
    total = len(list(permutations(range(n)))) ** r
    assert len(enumerate_actions(free_group(r), n)) == total


def test_grupo_libre_de_rango_2_en_grado_2(libre2):
    acciones = enumerate_actions(libre2, 2)
    assert len(acciones) == 4
    assert sum(is_transitive(a) for a in acciones) == 3
    assert acciones == sorted(acciones)


def test_grupo_libre_de_rango_2_en_grado_3(libre2):
    acciones = enumerate_actions(libre2, 3)
    assert len(acciones) == 36
    transitivas = [a for a in acciones if is_transitive(a)]
    oraculo = [a for a in acciones if _transitiva_por_fuerza_bruta(a.images, 3)]
    assert transitivas == oraculo
    assert len(transitivas) == 26


def test_enumeracion_respeta_relatores(recta3):
    acciones = enumerate_actions(recta3.base, 2)
    # cada bi es una involucion de {0,1}: 2^3 acciones
    assert len(acciones) == 8
    assert all(satisfies_relators(recta3.base, a) for a in acciones)


def test_grupo_ciclico_de_orden_3():
    p = Presentation(1, ((1, 1, 1),))
    imagenes = [a.images[0] for a in enumerate_actions(p, 3)]
    assert imagenes == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


@pytest.mark.parametrize("n", [2, 3])
def test_deduplicacion_por_conjugacion(libre2, n):
    todas = enumerate_actions(libre2, n)
    clases = enumerate_actions(libre2, n, up_to_conjugacy=True)
    assert sum(conjugacy_orbit_size(a) for a in clases) == len(todas)
    assert clases == sorted(clases)
    assert len(enumerate_actions(libre2, 2, up_to_conjugacy=True)) == 4


def test_presupuesto_agotado(libre2):
    with pytest.raises(BudgetExceeded) as info:
        enumerate_actions(libre2, 3, budget=10)
    assert info.value.nodes > 10
    assert info.value.partial_count > 0


def test_grado_invalido(libre2):
    with pytest.raises(DomainError):
        enumerate_actions(libre2, 0)


# ============================================================
# ORBITAS Y GALOIS
# ============================================================

def test_orbitas():
    a = PermutationAction(4, ((1, 0, 2, 3), (0, 1, 3, 2)))
    assert orbit_decomposition(a) == [[0, 1], [2, 3]]
    assert not is_transitive(a)


def test_generadores_de_schreier():
    a = PermutationAction(2, (SWAP, SWAP))
    assert stabilizer_schreier_generators(a, 0) == [Word((-1, 2)), Word((1, 1)), Word((2, 1))]
    for w in stabilizer_schreier_generators(a, 0):
        assert evaluate_word_perm(a, w)[0] == 0


def test_schreier_exige_transitividad():
    with pytest.raises(DomainError):
        stabilizer_schreier_generators(PermutationAction(2, (ID2,)), 0)


def test_ciclo_regular_es_galois():
    assert is_galois(PermutationAction(3, ((1, 2, 0), (0, 1, 2))))


def test_accion_de_s3_en_3_puntos_no_es_galois():
    assert not is_galois(PermutationAction(3, ((1, 0, 2), (1, 2, 0))))


def test_grado_2_transitivo_siempre_es_galois(libre2):
    for a in enumerate_actions(libre2, 2):
        if is_transitive(a):
            assert is_galois(a)


# ============================================================
# CUBRIENTES REALES
# ============================================================

def test_todos_los_generadores_como_transposicion(recta3):
    accion = PermutationAction(2, (SWAP, SWAP, SWAP))
    nucleo = restrict_action_to_kernel(recta3, accion)
    assert orbit_decomposition(nucleo) == [[0], [1]]
    estructura = real_structure_on_components(recta3, accion)
    assert estructura["involution"] == [1, 0]
    assert estructura["real_components"] == []


def test_restriccion_consistente_con_evaluacion_directa(recta3):
    accion = action_from_images(recta3.base, [SWAP, SWAP, ID2])
    nucleo = restrict_action_to_kernel(recta3, accion)
    assert orbit_decomposition(nucleo) == [[0, 1]]
    assert real_structure_on_components(recta3, accion)["real_components"] == [0]

    rng = random.Random(0)
    letras = [1, 2, 3, -1, -2, -3]
    for _ in range(20):
        w = reduce_word([rng.choice(letras) for _ in range(2 * rng.randint(1, 5))])
        assert evaluate_word_perm(nucleo, rewrite_in_kernel(recta3, w)) == evaluate_word_perm(accion, w)


def test_estructura_real_no_depende_del_levantamiento(recta3):
    for accion in enumerate_actions(recta3.base, 3):
        base = real_structure_on_components(recta3, accion)
        for h in (Word((2,)), Word((3,)), Word((1, 2, 3))):
            assert real_structure_on_components(recta3, accion, h) == base


def test_restriccion_conmuta_con_la_evaluacion(diedral):
    nucleo = kernel_presentation(diedral)
    for accion in enumerate_actions(diedral.base, 3):
        restringida = restrict_action_to_kernel(diedral, accion)
        for i, w in enumerate(nucleo.generator_words):
            assert evaluate_word_perm(restringida, Word((i + 1,))) == evaluate_word_perm(accion, w)


def test_levantamiento_par_rechazado(recta3):
    with pytest.raises(DomainError):
        real_structure_on_components(recta3, PermutationAction(2, (SWAP, SWAP, SWAP)), Word((1, 2)))


# ============================================================
# NUCLEO FRENTE A TODAS LAS ACCIONES
# ============================================================

GRUPOS_AUMENTADOS = {
    "diedral": lambda: semidirect_with_involution(free_group(1), [Word((-1,))]),
    "toro": lambda: semidirect_with_involution(surface_group(1), [Word((1,)), Word((-2,))]),
    "botella": lambda: semidirect_with_involution(
        Presentation(2, ((1, 2, 1, -2),), ("a", "b")), [Word((-1,)), Word((2,))]),
    "no_orientable_3": lambda: nonorientable_surface_group(3),
    **{f"recta{n}": (lambda n=n: real_punctured_line_group(n)) for n in range(2, 7)},
}


def _palabras_del_nucleo(ap, cantidad, semilla):
    rng = random.Random(semilla)
    m = ap.generator_count
    letras = [x for i in range(1, m + 1) for x in (i, -i)]
    palabras = []
    while len(palabras) < cantidad:
        w = reduce_word([rng.choice(letras) for _ in range(rng.randint(0, 8))])
        if augmentation_of_word(ap, w) == 0:
            palabras.append(w)
    return palabras


@pytest.mark.parametrize("nombre", sorted(GRUPOS_AUMENTADOS))
@pytest.mark.parametrize("n", [2, 3])
def test_relatores_del_nucleo_actuan_trivialmente(nombre, n):
    ap = GRUPOS_AUMENTADOS[nombre]()
    nucleo = kernel_presentation(ap)
    expandidos = [substitute(r, nucleo.generator_words) for r in nucleo.presentation.relators]
    identidad = tuple(range(n))
    for accion in enumerate_actions(ap.base, n):
        for r in expandidos:
            assert evaluate_word_perm(accion, r) == identidad


@pytest.mark.parametrize("nombre", sorted(GRUPOS_AUMENTADOS))
@pytest.mark.parametrize("n", [2, 3])
def test_reescritura_coincide_con_cada_accion(nombre, n):
    ap = GRUPOS_AUMENTADOS[nombre]()
    nucleo = kernel_presentation(ap)
    pares = [
        (w, substitute(rewrite_in_kernel(ap, w), nucleo.generator_words))
        for w in _palabras_del_nucleo(ap, 8, semilla=n)
    ]
    for accion in enumerate_actions(ap.base, n):
        for w, reescrita in pares:
            assert evaluate_word_perm(accion, reescrita) == evaluate_word_perm(accion, w)
