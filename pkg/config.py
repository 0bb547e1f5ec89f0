"""
Configuracion central del toolkit de superficies de Klein.
==========================================================
Todos los parametros numericos y de busqueda se cargan desde variables
de entorno (con valores por defecto razonables), de modo que los mismos
experimentos se reproducen en local o en CI sin tocar el codigo.
"""
import os

# Ruta base del proyecto
BASE_DIR = os.path.dirname(os.path.abspath(__file__))


def _env_float(nombre, defecto):
    valor = os.environ.get(nombre, "")
    return float(valor) if valor else defecto


def _env_int(nombre, defecto):
    valor = os.environ.get(nombre, "")
    return int(float(valor)) if valor else defecto


# ============================================================
# BUSQUEDA EXHAUSTIVA DE CUBRIENTES
# ============================================================
# Numero maximo de nodos expandidos por el backtracking de enumerate_actions.
# KLEIN_BUDGET tiene prioridad; el flag --budget del CLI la sobreescribe.
SEARCH_BUDGET = _env_int("KLEIN_BUDGET", 10_000_000)

# ============================================================
# TOLERANCIAS NUMERICAS (norma de Frobenius)
# ============================================================
SOLVE_TOL = _env_float("KLEIN_SOLVE_TOL", 1e-8)
CERTIFY_TOL = _env_float("KLEIN_CERTIFY_TOL", 1e-6)
UNITARY_TOL = _env_float("KLEIN_UNITARY_TOL", 1e-10)

# Umbral del pre-test de trazas en conjugator_search
TRACE_TOL = _env_float("KLEIN_TRACE_TOL", 1e-5)

# ============================================================
# SOLVER (descenso de gradiente en U(n))
# ============================================================
MAX_ITER = _env_int("KLEIN_MAX_ITER", 10_000)
INITIAL_STEP = _env_float("KLEIN_STEP", 0.1)
MIN_STEP = _env_float("KLEIN_MIN_STEP", 1e-14)

# ============================================================
# LOGS Y EXPORTACIONES
# ============================================================
LOG_LEVEL = os.environ.get("KLEIN_LOG_LEVEL", "WARNING").upper()
REPORT_DIR = os.environ.get("KLEIN_REPORT_DIR", os.path.join(BASE_DIR, "reportes"))
