"""
FORMATOS - Codificacion JSON de todos los tipos del toolkit
===========================================================
Esquemas (los mismos que lee y escribe el CLI):

  TopologicalType      {"g":int, "k":int, "a":0|1}
  CompactSurface       {"orientable":bool, "handles_or_crosscaps":int, "boundary":int}
  Word                 [+-(i+1), ...]
  Presentation         {"generators":[nombres], "relators":[[...], ...]}
  AugmentedPresentation  igual + "augmentation":[0|1, ...]
  PermutationAction    {"degree":n, "images":[[perm en una linea], ...]}
  matriz               filas de pares [re, im]
  UnitaryRep           {"presentation":..., "dimension":n, "matrices":[...], "residual":x}
  AugmentedUnitaryRep  igual + "signs":[+-1] + "real_structure":matriz
  Certificate          {"W":matriz, "residual":x, "tolerance":x, "passed":bool}

Los reales no finitos (residuo infinito) se escriben como null.
"""
import json
import math
import sys

import numpy as np

from errores import DomainError
from grupos import AugmentedPresentation, KernelPresentation, Presentation, Word, reduce_word
from cubrientes import PermutationAction
from representaciones import AugmentedUnitaryRep, Certificate, RealStructureMatrix, UnitaryRep
from superficies import CompactSurface, TopologicalType


# ============================================================
# LECTURA / ESCRITURA
# ============================================================

def leer_json(ruta):
    """Lee un documento JSON de un archivo o de la entrada estandar ('-')."""
    try:
        if ruta in (None, "-"):
            return json.load(sys.stdin)
        with open(ruta, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DomainError(f"JSON invalido en {ruta or 'stdin'}: {e}") from e
    except OSError as e:
        raise DomainError(f"no se pudo leer {ruta}: {e}") from e


def volcar(payload):
    """Serializacion determinista (una linea, claves en orden de insercion)."""
    return json.dumps(payload, ensure_ascii=False)


def _real(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _campo(datos, clave, tipo="objeto"):
    if not isinstance(datos, dict) or clave not in datos:
        raise DomainError(f"falta el campo '{clave}' en el {tipo} JSON")
    return datos[clave]


def _lista(valor, clave):
    if not isinstance(valor, list):
        raise DomainError(f"'{clave}' debe ser una lista JSON (recibido {valor!r})")
    return valor


# ============================================================
# SUPERFICIES
# ============================================================

def tipo_a_json(t):
    return {"g": t.g, "k": t.k, "a": t.a}


def tipo_desde_json(datos):
    return TopologicalType(_campo(datos, "g", "tipo"), _campo(datos, "k", "tipo"), _campo(datos, "a", "tipo"))


def superficie_a_json(s):
    return {"orientable": s.orientable, "handles_or_crosscaps": s.handles_or_crosscaps, "boundary": s.boundary}


def superficie_desde_json(datos):
    return CompactSurface(
        _campo(datos, "orientable", "superficie"),
        _campo(datos, "handles_or_crosscaps", "superficie"),
        _campo(datos, "boundary", "superficie"),
    )


# ============================================================
# PALABRAS Y PRESENTACIONES
# ============================================================

def palabra_a_json(w):
    return list(w.letters)


def palabra_desde_json(datos, generator_count=None):
    if not isinstance(datos, list):
        raise DomainError(f"una palabra es una lista de enteros, recibido {datos!r}")
    return reduce_word(datos, generator_count)


def palabra_desde_texto(texto, generator_count=None):
    """Acepta '[1,-2,3]' o '1,-2,3'; la cadena vacia es la palabra vacia."""
    texto = texto.strip()
    if texto.startswith("["):
        try:
            return palabra_desde_json(json.loads(texto), generator_count)
        except json.JSONDecodeError as e:
            raise DomainError(f"palabra invalida: {texto!r}") from e
    try:
        letras = [int(x) for x in texto.split(",") if x.strip()]
    except ValueError as e:
        raise DomainError(f"palabra invalida: {texto!r}") from e
    return reduce_word(letras, generator_count)


def presentacion_a_json(p):
    if isinstance(p, AugmentedPresentation):
        datos = presentacion_a_json(p.base)
        datos["augmentation"] = list(p.augmentation)
        return datos
    return {"generators": list(p.names), "relators": [palabra_a_json(r) for r in p.relators]}


def presentacion_desde_json(datos):
    """
    Presentation o AugmentedPresentation (si trae "augmentation").

    Tambien acepta documentos que envuelven una presentacion en
    "presentation" (nucleos y representaciones), para poder encadenar
    comandos por tuberia.
    """
    if isinstance(datos, dict) and "generators" not in datos and "presentation" in datos:
        return presentacion_desde_json(datos["presentation"])
    nombres = _campo(datos, "generators", "presentacion")
    if not isinstance(nombres, list) or not nombres:
        raise DomainError("'generators' debe ser una lista no vacia de nombres")
    n = len(nombres)
    relatores = [palabra_desde_json(r, n) for r in _lista(datos.get("relators", []), "relators")]
    base = Presentation(n, tuple(relatores), tuple(nombres))
    if "augmentation" in datos:
        return AugmentedPresentation(base, tuple(_lista(datos["augmentation"], "augmentation")))
    return base


def presentacion_aumentada_desde_json(datos):
    p = presentacion_desde_json(datos)
    if not isinstance(p, AugmentedPresentation):
        raise DomainError("se esperaba una presentacion aumentada (falta 'augmentation')")
    return p


def nucleo_a_json(nucleo):
    if not isinstance(nucleo, KernelPresentation):
        raise DomainError("se esperaba una KernelPresentation")
    return {
        "presentation": presentacion_a_json(nucleo.presentation),
        "generator_words": [palabra_a_json(w) for w in nucleo.generator_words],
        "transversal_rep": palabra_a_json(nucleo.transversal_rep),
    }


# ============================================================
# ACCIONES
# ============================================================

def accion_a_json(action):
    return {"degree": action.degree, "images": [list(p) for p in action.images]}


def accion_desde_json(datos):
    imagenes = _lista(_campo(datos, "images", "accion"), "images")
    for p in imagenes:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in _lista(p, "images")):
            raise DomainError(f"una permutacion es una lista de enteros, recibido {p!r}")
    return PermutationAction(_campo(datos, "degree", "accion"), tuple(imagenes))


# ============================================================
# MATRICES Y REPRESENTACIONES
# ============================================================

def matriz_a_json(M):
    return [[[float(z.real), float(z.imag)] for z in fila] for fila in np.asarray(M, dtype=complex)]


def matriz_desde_json(datos):
    try:
        arr = np.array(datos, dtype=float)
    except (TypeError, ValueError) as e:
        raise DomainError("una matriz es una lista de filas de pares [re, im]") from e
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DomainError(f"forma de matriz invalida: {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def rep_a_json(rep):
    datos = {
        "presentation": presentacion_a_json(rep.presentation),
        "dimension": rep.dimension,
        "matrices": [matriz_a_json(M) for M in rep.matrices],
        "residual": _real(rep.residual),
    }
    if isinstance(rep, AugmentedUnitaryRep):
        datos["signs"] = list(rep.signs)
        datos["real_structure"] = matriz_a_json(rep.real_structure.C)
    return datos


def rep_desde_json(datos):
    """UnitaryRep o AugmentedUnitaryRep segun el documento traiga "signs"."""
    p = presentacion_desde_json(_campo(datos, "presentation", "rep"))
    matrices = _campo(datos, "matrices", "rep")
    if not isinstance(matrices, list) or not matrices:
        raise DomainError("'matrices' debe ser una lista no vacia")
    matrices = [matriz_desde_json(M) for M in matrices]
    if len({M.shape for M in matrices}) != 1:
        raise DomainError(f"las matrices tienen formas distintas: {sorted({M.shape for M in matrices})}")
    matrices = np.stack(matrices)
    if "signs" in datos:
        if not isinstance(p, AugmentedPresentation):
            raise DomainError("una rep aumentada necesita una presentacion aumentada")
        C = RealStructureMatrix(matriz_desde_json(_campo(datos, "real_structure", "rep")))
        return AugmentedUnitaryRep(p, C, matrices, tuple(_lista(datos["signs"], "signs")))
    return UnitaryRep(p, matrices)


def estructura_desde_json(datos):
    return RealStructureMatrix(matriz_desde_json(datos))


def certificado_a_json(cert):
    if not isinstance(cert, Certificate):
        raise DomainError("se esperaba un Certificate")
    return {
        "W": matriz_a_json(cert.W),
        "residual": _real(cert.residual),
        "tolerance": _real(cert.tolerance),
        "passed": bool(cert.passed),
    }


def a_json(obj):
    """Despacho generico por tipo (usado por el CLI para los resultados de la libreria)."""
    codificadores = (
        (TopologicalType, tipo_a_json),
        (CompactSurface, superficie_a_json),
        (Word, palabra_a_json),
        (AugmentedPresentation, presentacion_a_json),
        (Presentation, presentacion_a_json),
        (KernelPresentation, nucleo_a_json),
        (PermutationAction, accion_a_json),
        (AugmentedUnitaryRep, rep_a_json),
        (UnitaryRep, rep_a_json),
        (Certificate, certificado_a_json),
    )
    for tipo, codificador in codificadores:
        if isinstance(obj, tipo):
            return codificador(obj)
    if isinstance(obj, np.ndarray):
        return matriz_a_json(obj)
    if isinstance(obj, (list, tuple)):
        return [a_json(x) for x in obj]
    if isinstance(obj, float):
        return _real(obj)
    return obj
