"""
KLEIN - CLI del toolkit de superficies de Klein
===============================================
Un arbol de subcomandos sobre la libreria:

  types    enumerate | count | check
  surface  quotient | double | euler | describe
  group    surface | punctured-sphere | real-line | nonorientable | free |
           semidirect | kernel | rewrite | abelianize | augmentation | outer
  covers   enumerate | classify | restrict
  repvar   solve | solve-augmented | restrict | kappa | conjugate | certify

Cada comando es un adaptador delgado: decodifica la entrada JSON (archivo
o '-' para stdin), llama a la libreria y codifica el resultado. El
payload va a stdout; los logs y diagnosticos van a stderr.

Uso:
  python main.py types count --genus 3
  python main.py group real-line --punctures 3 | python main.py group kernel
  python main.py group real-line --punctures 3 > g.json
  python main.py repvar solve-augmented --input g.json --dim 2 --seed 0 | python main.py repvar certify
  python main.py covers classify --input g.json --degree 3 --format xlsx --output covers.xlsx

Codigos de salida: 0 ok, 2 domain-error (incluye errores de uso),
3 resource-error, 4 convergence-error, 5 verification-failure.
"""
import argparse
import io
import json
import logging
import sys
from contextlib import redirect_stdout
from dataclasses import dataclass

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel

import config
import cubrientes
import formatos
import grupos
import representaciones
import superficies
import tablas
from errores import ConvergenceError, DomainError, KleinError

log = logging.getLogger("klein")

# stdout queda reservado para el payload
console = Console()
console_err = Console(stderr=True)

CODIGOS_SALIDA = {
    "ok": 0,
    "domain-error": 2,
    "resource-error": 3,
    "convergence-error": 4,
    "verification-failure": 5,
}


@dataclass
class CommandResult:
    """Resultado de una invocacion: estado, payload JSON y diagnosticos para stderr."""

    status: str
    payload: object = None
    diagnostics: str = ""
    formato: str = "json"
    output: str = None
    por_lineas: bool = False
    titulo: str = ""
    ayuda: str = ""

    @property
    def exit_code(self):
        return CODIGOS_SALIDA[self.status]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser que reporta los errores de uso como DomainError en vez de salir."""

    def error(self, message):
        raise DomainError(f"{self.prog}: {message}\n{self.format_usage()}")


# ============================================================
# ENTRADAS
# ============================================================

def _documento(args):
    return formatos.leer_json(args.input)


def _presentacion(args):
    return formatos.presentacion_desde_json(_documento(args))


def _presentacion_aumentada(args):
    return formatos.presentacion_aumentada_desde_json(_documento(args))


def _tipo(args):
    """Tipo desde --g --k --a o, si no se dan, desde el documento {"g","k","a"} de --input."""
    valores = (args.g, args.k, args.a)
    if all(v is None for v in valores):
        return formatos.tipo_desde_json(_documento(args))
    if any(v is None for v in valores):
        raise DomainError("--g, --k y --a van juntos (o ninguno, leyendo el tipo de --input)")
    return superficies.TopologicalType(*valores)


def _superficie(args):
    if args.handles is None:
        return formatos.superficie_desde_json(_documento(args))
    return superficies.CompactSurface(not args.non_orientable, args.handles, args.boundary)


def _palabra(texto, p):
    return formatos.palabra_desde_texto(texto, p.generator_count)


def _sigma(args, ap):
    return None if args.sigma is None else _palabra(args.sigma, ap)


def _estructura_real(args, n):
    if getattr(args, "real_structure", None):
        return formatos.estructura_desde_json(formatos.leer_json(args.real_structure))
    if getattr(args, "random_real_structure", None) is not None:
        return representaciones.random_real_structure(n, args.random_real_structure)
    return None


def _presupuesto(args):
    return config.SEARCH_BUDGET if args.budget is None else args.budget


# ============================================================
# TYPES / SURFACE
# ============================================================

def _cmd_types_enumerate(args):
    return formatos.a_json(superficies.enumerate_topological_types(args.genus))


def _cmd_types_count(args):
    return superficies.count_topological_types(args.genus)


def _cmd_types_check(args):
    t = _tipo(args)
    motivo = superficies.weichold_violation(t)
    valido = motivo is None
    real, compleja = superficies.betti_sums(t) if valido else (None, None)
    return {
        **formatos.tipo_a_json(t),
        "valid": valido,
        "reason": motivo,
        "maximal": superficies.is_maximal_curve(t) if valido else None,
        "real_betti": real,
        "complex_betti": compleja,
    }


def _cmd_surface_quotient(args):
    return formatos.superficie_a_json(superficies.quotient_surface(_tipo(args)))


def _cmd_surface_double(args):
    return formatos.tipo_a_json(superficies.double_surface(_superficie(args)))


def _cmd_surface_euler(args):
    return superficies.euler_characteristic(_superficie(args))


def _cmd_surface_describe(args):
    s = _superficie(args)
    return {
        **formatos.superficie_a_json(s),
        "euler": superficies.euler_characteristic(s),
        "name": superficies.describe_surface(s),
    }


# ============================================================
# GROUP
# ============================================================

def _cmd_group_surface(args):
    return formatos.presentacion_a_json(grupos.surface_group(args.genus))


def _cmd_group_punctured_sphere(args):
    return formatos.presentacion_a_json(grupos.punctured_sphere_group(args.punctures))


def _cmd_group_real_line(args):
    return formatos.presentacion_a_json(grupos.real_punctured_line_group(args.punctures))


def _cmd_group_nonorientable(args):
    return formatos.presentacion_a_json(grupos.nonorientable_surface_group(args.crosscaps))


def _cmd_group_free(args):
    return formatos.presentacion_a_json(grupos.free_group(args.rank))


def _cmd_group_semidirect(args):
    p = _presentacion(args)
    if isinstance(p, grupos.AugmentedPresentation):
        p = p.base
    imagenes = formatos.leer_json(args.action) if args.action.endswith(".json") else _json_en_linea(args.action)
    if not isinstance(imagenes, list):
        raise DomainError("--action debe ser una lista JSON de palabras")
    accion = [formatos.palabra_desde_json(w, p.generator_count) for w in imagenes]
    return formatos.presentacion_a_json(grupos.semidirect_with_involution(p, accion))


def _json_en_linea(texto):
    try:
        return json.loads(texto)
    except json.JSONDecodeError as e:
        raise DomainError(f"JSON invalido: {texto!r}") from e


def _invariantes(p):
    libre, torsion = grupos.abelianization_invariants(p)
    return {"free_rank": libre, "torsion": torsion}


def _cmd_group_kernel(args):
    nucleo = grupos.kernel_presentation(_presentacion_aumentada(args))
    return {**formatos.nucleo_a_json(nucleo), "abelianization": _invariantes(nucleo.presentation)}


def _cmd_group_rewrite(args):
    ap = _presentacion_aumentada(args)
    return formatos.palabra_a_json(grupos.rewrite_in_kernel(ap, _palabra(args.word, ap)))


def _cmd_group_abelianize(args):
    p = _presentacion(args)
    if isinstance(p, grupos.AugmentedPresentation):
        p = p.base
    return _invariantes(p)


def _cmd_group_augmentation(args):
    ap = _presentacion_aumentada(args)
    return grupos.augmentation_of_word(ap, _palabra(args.word, ap))


def _cmd_group_outer(args):
    ap = _presentacion_aumentada(args)
    sigma = _sigma(args, ap) or grupos.default_lift(ap)
    return formatos.a_json(grupos.outer_automorphism_on_kernel(ap, sigma))


# ============================================================
# COVERS
# ============================================================

def _cmd_covers_enumerate(args):
    p = _presentacion(args)
    base = p.base if isinstance(p, grupos.AugmentedPresentation) else p
    acciones = cubrientes.enumerate_actions(base, args.degree, args.up_to_conjugacy, _presupuesto(args))
    return formatos.a_json(acciones)


def _cmd_covers_classify(args):
    p = _presentacion(args)
    base = p.base if isinstance(p, grupos.AugmentedPresentation) else p
    acciones = cubrientes.enumerate_actions(base, args.degree, args.up_to_conjugacy, _presupuesto(args))
    filas = []
    for accion in acciones:
        transitiva = cubrientes.is_transitive(accion)
        fila = {
            "images": [list(x) for x in accion.images],
            "transitive": transitiva,
            "galois": cubrientes.is_galois(accion) if transitiva else False,
            "orbits": cubrientes.orbit_decomposition(accion),
        }
        if args.up_to_conjugacy:
            fila["orbit_size"] = cubrientes.conjugacy_orbit_size(accion)
        filas.append(fila)
    return {
        "degree": args.degree,
        "total": len(filas),
        "transitive": sum(f["transitive"] for f in filas),
        "galois": sum(f["galois"] for f in filas),
        "rows": filas,
    }


def _cmd_covers_restrict(args):
    ap = _presentacion_aumentada(args)
    if args.action:
        accion = formatos.accion_desde_json(formatos.leer_json(args.action))
        acciones = [cubrientes.action_from_images(ap.base, accion.images)]
    else:
        if args.degree is None:
            raise DomainError("covers restrict necesita --degree o --action")
        acciones = cubrientes.enumerate_actions(ap.base, args.degree, args.up_to_conjugacy, _presupuesto(args))
    filas = []
    for accion in acciones:
        nucleo = cubrientes.restrict_action_to_kernel(ap, accion)
        estructura = cubrientes.real_structure_on_components(ap, accion)
        filas.append({
            "images": [list(x) for x in accion.images],
            "kernel_images": [list(x) for x in nucleo.images],
            **estructura,
        })
    return {"rows": filas}


# ============================================================
# REPVAR
# ============================================================

def _opciones(args):
    base = representaciones.SolveOptions()
    return representaciones.SolveOptions(
        tol=base.tol if args.tol is None else args.tol,
        max_iter=base.max_iter if args.max_iter is None else args.max_iter,
        step=base.step,
        min_step=base.min_step,
    )


def _cmd_repvar_solve(args):
    p = _presentacion(args)
    if isinstance(p, grupos.AugmentedPresentation):
        p = p.base
    return formatos.rep_a_json(representaciones.solve_rep(p, args.dim, args.seed, _opciones(args)))


def _cmd_repvar_solve_augmented(args):
    ap = _presentacion_aumentada(args)
    C = _estructura_real(args, args.dim)
    return formatos.rep_a_json(representaciones.solve_augmented_rep(ap, args.dim, C, args.seed, _opciones(args)))


def _rep_aumentada(args):
    rep = formatos.rep_desde_json(_documento(args))
    if not isinstance(rep, representaciones.AugmentedUnitaryRep):
        raise DomainError("se esperaba una representacion aumentada (falta 'signs')")
    return rep


def _cmd_repvar_restrict(args):
    return formatos.rep_a_json(representaciones.restrict_rep(_rep_aumentada(args)))


def _cmd_repvar_kappa(args):
    rep = formatos.rep_desde_json(_documento(args))
    if isinstance(rep, representaciones.AugmentedUnitaryRep):
        ap, C = rep.presentation, rep.real_structure
        chi = representaciones.restrict_rep(rep)
    else:
        if not args.group:
            raise DomainError("kappa sobre una rep del nucleo necesita --group con la presentacion aumentada")
        ap = formatos.presentacion_aumentada_desde_json(formatos.leer_json(args.group))
        C = _estructura_real(args, rep.dimension)
        chi = rep
    return formatos.rep_a_json(representaciones.kappa(chi, ap, C, _sigma(args, ap)))


def _cmd_repvar_conjugate(args):
    chi1 = formatos.rep_desde_json(_documento(args))
    if args.apply:
        W = formatos.matriz_desde_json(formatos.leer_json(args.apply))
        return formatos.rep_a_json(representaciones.conjugate_rep(chi1, W))
    chi2 = formatos.rep_desde_json(formatos.leer_json(args.other))
    W = representaciones.conjugator_search(chi1, chi2, args.tol)
    if W is None:
        return {"found": False, "W": None, "residual": None}
    residuo = max(float(np.linalg.norm(W @ A @ W.conj().T - B)) for A, B in zip(chi1.matrices, chi2.matrices))
    return {"found": True, "W": formatos.matriz_a_json(W), "residual": residuo}


def _cmd_repvar_certify(args):
    augrep = _rep_aumentada(args)
    cert = representaciones.verify_fix_kappa(augrep, _sigma(args, augrep.presentation), args.tol)
    return formatos.certificado_a_json(cert)


# ============================================================
# PARSER
# ============================================================

def _construir_parser():
    comunes = _Parser(add_help=False)
    comunes.add_argument("--input", "-i", default="-",
                         help="Documento JSON de entrada (ruta o '-' para stdin)")
    comunes.add_argument("--format", "-f", dest="formato", default="json",
                         choices=["json", "csv", "table", "xlsx"],
                         help="Formato de salida (csv/xlsx solo para payloads tabulares)")
    comunes.add_argument("--output", "-o", default=None,
                         help="Archivo de salida (por defecto stdout; xlsx usa KLEIN_REPORT_DIR)")

    parser = _Parser(prog="klein", description="Toolkit de superficies de Klein")
    parser.add_argument("--verbose", "-v", action="store_true", help="Logs de depuracion en stderr")
    grupos_cmd = parser.add_subparsers(dest="grupo", required=True)

    def hoja(sub, nombre, funcion, ayuda):
        p = sub.add_parser(nombre, parents=[comunes], help=ayuda)
        p.set_defaults(funcion=funcion, titulo=f"{sub.titulo}-{nombre}")
        return p

    def rama(nombre, ayuda):
        p = grupos_cmd.add_parser(nombre, help=ayuda)
        sub = p.add_subparsers(dest="comando", required=True)
        sub.titulo = nombre
        return sub

    def tipo_flags(p):
        p.add_argument("--g", type=int, default=None, help="Genero")
        p.add_argument("--k", type=int, default=None, help="Numero de circulos reales")
        p.add_argument("--a", type=int, default=None, choices=[0, 1], help="0 dividing, 1 non-dividing")

    def superficie_flags(p):
        p.add_argument("--non-orientable", action="store_true", help="Superficie no orientable")
        p.add_argument("--handles", type=int, default=None,
                       help="Asas (orientable) o planos proyectivos (no orientable); sin el, se lee --input")
        p.add_argument("--boundary", type=int, default=0, help="Circulos de borde")

    def busqueda_flags(p, grado_requerido=True):
        p.add_argument("--degree", "-n", type=int, required=grado_requerido, default=None, help="Grado del cubriente")
        p.add_argument("--up-to-conjugacy", action="store_true", help="Un representante por clase de conjugacion")
        p.add_argument("--budget", type=int, default=None, help="Maximo de nodos (por defecto KLEIN_BUDGET)")

    def solver_flags(p):
        p.add_argument("--dim", type=int, required=True, help="Dimension n de U(n)")
        p.add_argument("--seed", type=int, default=0, help="Semilla del generador aleatorio")
        p.add_argument("--tol", type=float, default=None, help="Tolerancia del residuo")
        p.add_argument("--max-iter", type=int, default=None, help="Tope de iteraciones")

    # --- types ---
    sub = rama("types", "Tipos topologicos (g, k, a)")
    hoja(sub, "enumerate", _cmd_types_enumerate, "Todos los tipos de genero g").add_argument(
        "--genus", type=int, required=True)
    hoja(sub, "count", _cmd_types_count, "Numero de tipos de genero g").add_argument(
        "--genus", type=int, required=True)
    tipo_flags(hoja(sub, "check", _cmd_types_check, "Validez de Weichold, M-curva y sumas de Betti"))

    # --- surface ---
    sub = rama("surface", "Cociente, doble y caracteristica de Euler")
    tipo_flags(hoja(sub, "quotient", _cmd_surface_quotient, "Superficie cociente de un tipo"))
    superficie_flags(hoja(sub, "double", _cmd_surface_double, "Tipo del doble de una superficie"))
    superficie_flags(hoja(sub, "euler", _cmd_surface_euler, "Caracteristica de Euler"))
    superficie_flags(hoja(sub, "describe", _cmd_surface_describe, "Nombre legible de la superficie"))

    # --- group ---
    sub = rama("group", "Presentaciones (aumentadas)")
    hoja(sub, "surface", _cmd_group_surface, "Grupo de superficie de genero g").add_argument(
        "--genus", type=int, required=True)
    hoja(sub, "punctured-sphere", _cmd_group_punctured_sphere, "Esfera menos n puntos").add_argument(
        "--punctures", type=int, required=True)
    hoja(sub, "real-line", _cmd_group_real_line, "Recta real pinchada (aumentada)").add_argument(
        "--punctures", type=int, required=True)
    hoja(sub, "nonorientable", _cmd_group_nonorientable, "Superficie no orientable cerrada (sin puntos reales)").add_argument(
        "--crosscaps", type=int, required=True)
    hoja(sub, "free", _cmd_group_free, "Grupo libre de rango r").add_argument(
        "--rank", type=int, required=True)
    hoja(sub, "semidirect", _cmd_group_semidirect, "Producto semidirecto por una involucion").add_argument(
        "--action", required=True, help="Lista JSON de palabras (o archivo .json) con la imagen de cada generador")
    hoja(sub, "kernel", _cmd_group_kernel, "Presentacion del nucleo (Reidemeister-Schreier)")
    hoja(sub, "rewrite", _cmd_group_rewrite, "Reescribe una palabra del nucleo").add_argument(
        "--word", required=True, help="Palabra, p. ej. '[1,2]' o '1,2'")
    hoja(sub, "abelianize", _cmd_group_abelianize, "Rango libre y torsion de la abelianizacion")
    hoja(sub, "augmentation", _cmd_group_augmentation, "Aumentacion de una palabra").add_argument(
        "--word", required=True)
    hoja(sub, "outer", _cmd_group_outer, "Accion exterior de sigma sobre el nucleo").add_argument(
        "--sigma", default=None, help="Levantamiento de sigma (por defecto 's' o el primer generador impar)")

    # --- covers ---
    sub = rama("covers", "Cubrientes finitos como acciones por permutaciones")
    busqueda_flags(hoja(sub, "enumerate", _cmd_covers_enumerate, "Acciones de grado n (una por linea)"))
    busqueda_flags(hoja(sub, "classify", _cmd_covers_classify, "Transitividad, orbitas y Galois"))
    p = hoja(sub, "restrict", _cmd_covers_restrict, "Restriccion al nucleo y estructura real en componentes")
    busqueda_flags(p, grado_requerido=False)
    p.add_argument("--action", default=None, help="Archivo JSON con una accion concreta")

    # --- repvar ---
    sub = rama("repvar", "Variedades de representaciones unitarias")
    solver_flags(hoja(sub, "solve", _cmd_repvar_solve, "Representacion en U(n)"))
    p = hoja(sub, "solve-augmented", _cmd_repvar_solve_augmented, "Representacion en U(n) x| Z/2Z")
    solver_flags(p)
    p.add_argument("--real-structure", default=None, help="Archivo JSON con la matriz C")
    p.add_argument("--random-real-structure", type=int, default=None, metavar="SEED",
                   help="C = Q Q^T aleatoria con esa semilla")
    hoja(sub, "restrict", _cmd_repvar_restrict, "Restriccion Phi al nucleo")
    p = hoja(sub, "kappa", _cmd_repvar_kappa, "Involucion kappa sobre una rep del nucleo")
    p.add_argument("--group", default=None, help="Presentacion aumentada (si --input es una rep del nucleo)")
    p.add_argument("--sigma", default=None, help="Levantamiento de sigma")
    p.add_argument("--real-structure", default=None, help="Archivo JSON con la matriz C")
    p = hoja(sub, "conjugate", _cmd_repvar_conjugate, "Busca un conjugador o aplica Ad_W")
    destino = p.add_mutually_exclusive_group(required=True)
    destino.add_argument("--other", default=None, help="Segunda rep: busca W con W chi1 W^-1 = chi2")
    destino.add_argument("--apply", default=None, help="Matriz W (JSON): devuelve Ad_W o chi")
    p.add_argument("--tol", type=float, default=None)
    p = hoja(sub, "certify", _cmd_repvar_certify, "Certifica que Phi(rho) esta en Fix(kappa)")
    p.add_argument("--sigma", default=None, help="Levantamiento de sigma")
    p.add_argument("--tol", type=float, default=None)

    return parser


# ============================================================
# EJECUCION
# ============================================================

def _resultado_error(e):
    payload = {"error": str(e), **e.detalles()}
    for clave, valor in payload.items():
        payload[clave] = formatos.a_json(valor)
    if isinstance(e, ConvergenceError) and e.best is not None and not isinstance(e.best, np.ndarray):
        payload["best"] = formatos.a_json(e.best)
    return CommandResult(e.status, payload, str(e))


def run(argv):
    """
    Ejecuta una invocacion sin tocar el proceso (ni sys.exit ni stdout).

    --verbose baja el nivel de logs solo durante la invocacion.

    Args:
        argv: lista de argumentos (sin el nombre del programa)

    Returns:
        CommandResult
    """
    parser = _construir_parser()
    ayuda = io.StringIO()
    try:
        with redirect_stdout(ayuda):
            args = parser.parse_args(list(argv))
    except DomainError as e:
        return CommandResult("domain-error", {"error": str(e)}, str(e))
    except SystemExit as e:
        # --help: el texto de ayuda queda en el resultado
        return CommandResult("ok" if not e.code else "domain-error", ayuda=ayuda.getvalue())

    raiz = logging.getLogger()
    nivel_previo = raiz.level
    if args.verbose:
        raiz.setLevel(logging.DEBUG)
    try:
        log.debug("[CLI] %s %s", args.grupo, args.comando)
        return _ejecutar(args)
    finally:
        raiz.setLevel(nivel_previo)


def _ejecutar(args):
    try:
        payload = args.funcion(args)
        resultado = CommandResult("ok", payload, formato=args.formato, output=args.output,
                                  por_lineas=args.titulo == "covers-enumerate", titulo=args.titulo)
        if args.formato in ("csv", "xlsx") and not tablas.es_tabular(payload):
            raise DomainError(f"'{args.titulo}' produce un payload estructurado: use --format json")
        if args.formato == "xlsx":
            ruta = tablas.exportar_xlsx(payload, args.output, args.titulo)
            resultado.diagnostics = f"[XLSX] {ruta}"
        return resultado
    except KleinError as e:
        log.debug("[CLI] %s: %s", e.status, e)
        return _resultado_error(e)


def _texto_salida(resultado):
    if resultado.formato == "csv":
        return tablas.a_csv(resultado.payload)
    if resultado.por_lineas and isinstance(resultado.payload, list):
        return "".join(formatos.volcar(x) + "\n" for x in resultado.payload)
    return formatos.volcar(resultado.payload) + "\n"


def _emitir(resultado):
    if resultado.status != "ok":
        console_err.print(Panel.fit(
            f"[bold red]{resultado.status.upper()}[/bold red]\n{escape(resultado.diagnostics)}",
            border_style="red",
        ))
        if resultado.payload is not None:
            sys.stdout.write(formatos.volcar(resultado.payload) + "\n")
        return
    if resultado.payload is None:
        sys.stdout.write(resultado.ayuda)
        return
    if resultado.formato == "xlsx":
        console_err.print(f"[green]{escape(resultado.diagnostics)}[/green]")
    elif resultado.formato == "table":
        console.print(tablas.tabla_rich(resultado.payload, resultado.titulo))
    elif resultado.output:
        with open(resultado.output, "w", encoding="utf-8") as f:
            f.write(_texto_salida(resultado))
        console_err.print(f"[green]Escrito: {escape(resultado.output)}[/green]")
    else:
        sys.stdout.write(_texto_salida(resultado))


def _configurar_logs():
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format="%(message)s",
        handlers=[RichHandler(console=console_err, show_path=False, markup=False)],
    )


def main(argv=None):
    _configurar_logs()
    resultado = run(sys.argv[1:] if argv is None else argv)
    _emitir(resultado)
    sys.exit(resultado.exit_code)


if __name__ == "__main__":
    main()
