import pytest

from errores import DomainError
from superficies import (
    CompactSurface,
    TopologicalType,
    betti_sums,
    connected_sum,
    count_topological_types,
    describe_surface,
    double_surface,
    enumerate_topological_types,
    euler_characteristic,
    is_maximal_curve,
    quotient_surface,
    weichold_valid,
    weichold_violation,
)


def _todos_los_tipos(hasta=20):
    for g in range(hasta + 1):
        yield from enumerate_topological_types(g)


@pytest.mark.parametrize("g, esperado", [(0, 2), (1, 3), (2, 5), (3, 6)])
def test_conteo_en_genero_bajo(g, esperado):
    assert len(enumerate_topological_types(g)) == esperado
    assert count_topological_types(g) == esperado


def test_conteo_coincide_con_formula_hasta_genero_20():
    for g in range(21):
        tipos = enumerate_topological_types(g)
        assert len(tipos) == (3 * g + 4) // 2
        assert len(set(tipos)) == len(tipos)
        assert all(weichold_valid(t) for t in tipos)


def test_enumeracion_ordenada_por_a_y_k():
    assert enumerate_topological_types(1) == [
        TopologicalType(1, 2, 0),
        TopologicalType(1, 0, 1),
        TopologicalType(1, 1, 1),
    ]


def test_genero_negativo_rechazado():
    with pytest.raises(DomainError):
        enumerate_topological_types(-1)
    with pytest.raises(DomainError):
        TopologicalType(-1, 0, 1)
    with pytest.raises(DomainError):
        TopologicalType(1, 0, 2)


@pytest.mark.parametrize("t, valido", [
    (TopologicalType(2, 3, 0), True),
    (TopologicalType(2, 1, 0), True),
    (TopologicalType(2, 2, 0), False),   # paridad
    (TopologicalType(2, 4, 0), False),   # Harnack
    (TopologicalType(2, 3, 1), False),   # a=1 exige k <= g
    (TopologicalType(0, 0, 0), False),   # dividing sin circulos
    (TopologicalType(0, 0, 1), True),
])
def test_condiciones_de_weichold(t, valido):
    assert weichold_valid(t) is valido
    assert (weichold_violation(t) is None) is valido


def test_mensaje_de_harnack():
    assert "Harnack" in weichold_violation(TopologicalType(2, 4, 0))


def test_doble_del_cociente_es_la_identidad():
    for t in _todos_los_tipos():
        s = quotient_surface(t)
        assert double_surface(s) == t
        assert euler_characteristic(s) == 1 - t.g


def test_curvas_maximales_cocientan_a_esfera_menos_discos():
    for t in _todos_los_tipos():
        assert t.k <= t.g + 1
        if is_maximal_curve(t):
            assert t.a == 0
            assert quotient_surface(t) == CompactSurface(True, 0, t.g + 1)


def test_sumas_de_betti_caracterizan_curvas_maximales():
    assert betti_sums(TopologicalType(2, 3, 0)) == (6, 6)
    assert betti_sums(TopologicalType(2, 1, 1)) == (2, 6)
    for t in _todos_los_tipos(8):
        real, compleja = betti_sums(t)
        assert (real == compleja) == is_maximal_curve(t)


def test_tipo_invalido_en_cociente():
    with pytest.raises(DomainError):
        quotient_surface(TopologicalType(1, 1, 0))


@pytest.mark.parametrize("t, nombre", [
    (TopologicalType(0, 1, 0), "disc"),
    (TopologicalType(0, 0, 1), "projective plane"),
    (TopologicalType(1, 2, 0), "annulus"),
    (TopologicalType(1, 1, 1), "Mobius band"),
    (TopologicalType(1, 0, 1), "Klein bottle"),
])
def test_cocientes_de_genero_bajo(t, nombre):
    assert describe_surface(quotient_surface(t)) == nombre


def test_doble_de_superficie_cerrada_orientable():
    with pytest.raises(DomainError, match="disconnected double"):
        double_surface(CompactSurface(True, 1, 0))


def test_doble_de_superficies_no_orientables():
    # Banda de Mobius (h=1, l=1) -> toro con un circulo real, no dividing
    assert double_surface(CompactSurface(False, 1, 1)) == TopologicalType(1, 1, 1)
    # Botella de Klein -> genero 1 sin puntos reales
    assert double_surface(CompactSurface(False, 2, 0)) == TopologicalType(1, 0, 1)


def test_superficie_no_orientable_sin_planos_proyectivos():
    with pytest.raises(DomainError):
        CompactSurface(False, 0, 1)


def test_suma_conexa():
    toro = CompactSurface(True, 1, 0)
    proyectivo = CompactSurface(False, 1, 0)
    disco = CompactSurface(True, 0, 1)
    assert connected_sum(toro, toro) == CompactSurface(True, 2, 0)
    assert connected_sum(toro, proyectivo) == CompactSurface(False, 3, 0)
    assert connected_sum(proyectivo, disco) == CompactSurface(False, 1, 1)
    for s1, s2 in [(toro, proyectivo), (proyectivo, disco), (toro, disco)]:
        chi = euler_characteristic(connected_sum(s1, s2))
        assert chi == euler_characteristic(s1) + euler_characteristic(s2) - 2
