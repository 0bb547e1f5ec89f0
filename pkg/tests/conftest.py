"""Fixtures compartidas: presentaciones de ejemplo y escritura de documentos JSON."""
import json

import pytest

from grupos import Word, free_group, real_punctured_line_group, semidirect_with_involution, surface_group


@pytest.fixture
def libre2():
    return free_group(2)


@pytest.fixture
def recta3():
    """<b1,b2,b3 | bi^2> con todos los bi impares."""
    return real_punctured_line_group(3)


@pytest.fixture
def diedral():
    """Diedral infinito <a, s | s^2, s a^-1 s^-1 a^-1>."""
    return semidirect_with_involution(free_group(1), [Word((-1,))])


@pytest.fixture
def toro_semidirecto():
    """Z^2 x| Z/2Z con la involucion a -> a, b -> b^-1."""
    return semidirect_with_involution(surface_group(1), [Word((1,)), Word((-2,))])


@pytest.fixture
def escribir_json(tmp_path):
    """Escribe un documento JSON en tmp_path y devuelve su ruta como texto."""
    def _escribir(nombre, datos):
        ruta = tmp_path / nombre
        ruta.write_text(json.dumps(datos), encoding="utf-8")
        return str(ruta)
    return _escribir
