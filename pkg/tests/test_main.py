import json
import logging

from openpyxl import load_workbook

import formatos
import tablas
from grupos import real_punctured_line_group
from main import _texto_salida, run
from superficies import enumerate_topological_types


def _ok(argv):
    resultado = run(argv)
    assert resultado.status == "ok", resultado.diagnostics
    assert resultado.exit_code == 0
    return resultado.payload


def _a_archivo(escribir_json, nombre, argv):
    return escribir_json(nombre, _ok(argv))


# ============================================================
# TYPES / SURFACE
# ============================================================

def test_conteo_de_tipos():
    assert _ok(["types", "count", "--genus", "3"]) == 6


def test_enumeracion_igual_que_la_libreria():
    payload = _ok(["types", "enumerate", "--genus", "2"])
    assert payload == [formatos.tipo_a_json(t) for t in enumerate_topological_types(2)]


def test_check_de_tipo_invalido():
    payload = _ok(["types", "check", "--g", "2", "--k", "4", "--a", "0"])
    assert payload["valid"] is False
    assert "Harnack" in payload["reason"]
    payload = _ok(["types", "check", "--g", "2", "--k", "3", "--a", "0"])
    assert payload["maximal"] is True and payload["real_betti"] == payload["complex_betti"] == 6


def test_cociente_y_doble():
    assert _ok(["surface", "quotient", "--g", "1", "--k", "0", "--a", "1"]) == {
        "orientable": False, "handles_or_crosscaps": 2, "boundary": 0,
    }
    assert _ok(["surface", "double", "--non-orientable", "--handles", "2"]) == {"g": 1, "k": 0, "a": 1}
    assert _ok(["surface", "euler", "--handles", "2", "--boundary", "1"]) == -3
    assert _ok(["surface", "describe", "--non-orientable", "--handles", "1", "--boundary", "1"])["name"] == "Mobius band"


def test_doble_desde_archivo(escribir_json):
    ruta = escribir_json("s.json", {"orientable": True, "handles_or_crosscaps": 0, "boundary": 3})
    assert _ok(["surface", "double", "--input", ruta]) == {"g": 2, "k": 3, "a": 0}


def test_doble_disconexo_es_error_de_dominio():
    resultado = run(["surface", "double", "--handles", "1"])
    assert resultado.status == "domain-error"
    assert resultado.exit_code == 2
    assert "disconnected double" in resultado.diagnostics


# ============================================================
# ERRORES DE USO
# ============================================================

def test_subcomando_desconocido():
    resultado = run(["bogus"])
    assert resultado.status == "domain-error" and resultado.exit_code == 2


def test_flag_obligatorio_ausente():
    resultado = run(["types", "count"])
    assert resultado.exit_code == 2
    assert "--genus" in resultado.diagnostics


def test_archivo_inexistente(tmp_path):
    resultado = run(["group", "kernel", "--input", str(tmp_path / "nada.json")])
    assert resultado.status == "domain-error"


# ============================================================
# GROUP
# ============================================================

def test_recta_real_y_nucleo(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    nucleo = _ok(["group", "kernel", "--input", ruta])
    assert nucleo["abelianization"] == {"free_rank": 2, "torsion": []}
    assert nucleo["generator_words"] == [[2, -1], [3, -1]]
    # la salida del nucleo se puede volver a leer como presentacion
    ruta_nucleo = escribir_json("nucleo.json", nucleo)
    assert _ok(["group", "abelianize", "--input", ruta_nucleo]) == {"free_rank": 2, "torsion": []}


def test_reescritura_y_aumentacion(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    assert _ok(["group", "rewrite", "--input", ruta, "--word", "1,2"]) == [-1]
    assert _ok(["group", "augmentation", "--input", ruta, "--word", "[1,-2,3]"]) == 1
    resultado = run(["group", "rewrite", "--input", ruta, "--word", "1"])
    assert resultado.status == "domain-error"


def test_semidirecto_y_accion_exterior(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "1"])
    diedral = _ok(["group", "semidirect", "--input", ruta, "--action", "[[-1]]"])
    assert diedral["generators"] == ["g1", "s"]
    assert diedral["augmentation"] == [0, 1]
    ruta_diedral = escribir_json("diedral.json", diedral)
    assert _ok(["group", "outer", "--input", ruta_diedral]) == [[-1]]


def test_grupo_de_superficie():
    assert _ok(["group", "surface", "--genus", "1"]) == {
        "generators": ["a1", "b1"], "relators": [[1, 2, -1, -2]],
    }


# ============================================================
# COVERS
# ============================================================

def test_enumeracion_en_lineas(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "2"])
    resultado = run(["covers", "enumerate", "--input", ruta, "--degree", "2"])
    assert resultado.status == "ok"
    lineas = _texto_salida(resultado).splitlines()
    assert len(lineas) == 4
    assert json.loads(lineas[0]) == {"degree": 2, "images": [[0, 1], [0, 1]]}


def test_clasificacion(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "2"])
    payload = _ok(["covers", "classify", "--input", ruta, "--degree", "2"])
    assert (payload["total"], payload["transitive"], payload["galois"]) == (4, 3, 3)
    payload = _ok(["covers", "classify", "--input", ruta, "--degree", "3", "--up-to-conjugacy"])
    assert sum(f["orbit_size"] for f in payload["rows"]) == 36


def test_presupuesto_agotado(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "2"])
    resultado = run(["covers", "enumerate", "--input", ruta, "--degree", "3", "--budget", "5"])
    assert resultado.status == "resource-error"
    assert resultado.exit_code == 3
    assert "partial_count" in resultado.payload


def test_restriccion_de_una_accion(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    accion = escribir_json("accion.json", {"degree": 2, "images": [[1, 0], [1, 0], [1, 0]]})
    payload = _ok(["covers", "restrict", "--input", ruta, "--action", accion])
    (fila,) = payload["rows"]
    assert fila["components"] == [[0], [1]]
    assert fila["involution"] == [1, 0]


# ============================================================
# REPVAR
# ============================================================

def test_pipeline_de_certificado(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    rep = _ok(["repvar", "solve-augmented", "--input", ruta, "--dim", "1", "--seed", "0"])
    assert rep["signs"] == [-1, -1, -1]
    ruta_rep = escribir_json("rep.json", rep)
    cert = _ok(["repvar", "certify", "--input", ruta_rep])
    assert cert["passed"] is True
    assert cert["residual"] < 1e-6
    chi = _ok(["repvar", "restrict", "--input", ruta_rep])
    assert chi["dimension"] == 1 and "signs" not in chi
    kappa = _ok(["repvar", "kappa", "--input", ruta_rep])
    ruta_chi, ruta_kappa = escribir_json("chi.json", chi), escribir_json("kappa.json", kappa)
    assert _ok(["repvar", "kappa", "--input", ruta_chi, "--group", ruta]) == kappa
    assert _ok(["repvar", "conjugate", "--input", ruta_chi, "--other", ruta_kappa])["found"] is True


def test_salida_determinista(escribir_json):
    ruta = escribir_json("recta.json", formatos.presentacion_a_json(real_punctured_line_group(3)))
    argv = ["repvar", "solve-augmented", "--input", ruta, "--dim", "2", "--seed", "1", "--max-iter", "50"]
    assert _texto_salida(run(argv)) == _texto_salida(run(argv))


def test_certificar_rep_no_aumentada(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "1"])
    rep = escribir_json("rep.json", _ok(["repvar", "solve", "--input", ruta, "--dim", "2"]))
    resultado = run(["repvar", "certify", "--input", rep])
    assert resultado.status == "domain-error"


def test_error_de_convergencia(escribir_json):
    ruta = _a_archivo(escribir_json, "sup.json", ["group", "surface", "--genus", "2"])
    resultado = run(["repvar", "solve", "--input", ruta, "--dim", "2", "--max-iter", "0"])
    assert resultado.status == "convergence-error"
    assert resultado.exit_code == 4
    assert resultado.payload["best"]["dimension"] == 2


def test_rep_ida_y_vuelta_por_json(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "2"])
    rep = _ok(["repvar", "solve", "--input", ruta, "--dim", "2", "--seed", "3"])
    leida = formatos.rep_a_json(formatos.rep_desde_json(rep))
    assert leida["matrices"] == rep["matrices"]
    assert leida["presentation"] == rep["presentation"]


# ============================================================
# FORMATOS TABULARES
# ============================================================

def test_csv_de_tipos():
    resultado = run(["types", "enumerate", "--genus", "1", "--format", "csv"])
    assert resultado.status == "ok"
    assert _texto_salida(resultado) == "g,k,a\n1,2,0\n1,0,1\n1,1,1\n"


def test_csv_de_payload_estructurado_rechazado():
    resultado = run(["group", "surface", "--genus", "1", "--format", "csv"])
    assert resultado.status == "domain-error"


def test_xlsx(tmp_path):
    destino = tmp_path / "tipos.xlsx"
    resultado = run(["types", "enumerate", "--genus", "3", "--format", "xlsx", "--output", str(destino)])
    assert resultado.status == "ok"
    hoja = load_workbook(destino).active
    filas = list(hoja.iter_rows(values_only=True))
    assert filas[0] == ("g", "k", "a")
    assert len(filas) == 1 + 6


def test_tabla_rich_de_payload_estructurado():
    tabla = tablas.tabla_rich({"generators": ["a1"], "relators": [[1, 1]]}, "grupo")
    assert tabla.row_count == 2


# ============================================================
# DOCUMENTOS MAL FORMADOS
# ============================================================

def _error_de_dominio(argv):
    resultado = run(argv)
    assert resultado.status == "domain-error", resultado.diagnostics
    assert resultado.exit_code == 2
    return resultado


def test_accion_sin_imagenes(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    accion = escribir_json("accion.json", {"degree": 2})
    _error_de_dominio(["covers", "restrict", "--input", ruta, "--action", accion])


def test_accion_con_permutaciones_mal_tipadas(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "3"])
    for imagenes in (5, [1, 0, 1], [["a", "b"]] * 3, [[1, 0]] * 2):
        accion = escribir_json("accion.json", {"degree": 2, "images": imagenes})
        _error_de_dominio(["covers", "restrict", "--input", ruta, "--action", accion])


def test_aumentacion_escalar(escribir_json):
    ruta = escribir_json("g.json", {"generators": ["b1", "b2"], "relators": [[1, 1], [2, 2]], "augmentation": 1})
    _error_de_dominio(["group", "kernel", "--input", ruta])


def test_relatores_no_lista(escribir_json):
    ruta = escribir_json("g.json", {"generators": ["a"], "relators": 5})
    _error_de_dominio(["group", "abelianize", "--input", ruta])
    ruta = escribir_json("g.json", {"generators": ["a"], "relators": [5]})
    _error_de_dominio(["group", "abelianize", "--input", ruta])


def test_signos_escalares(escribir_json):
    ruta = _a_archivo(escribir_json, "recta.json", ["group", "real-line", "--punctures", "2"])
    rep = _ok(["repvar", "solve-augmented", "--input", ruta, "--dim", "1"])
    rep["signs"] = -1
    _error_de_dominio(["repvar", "certify", "--input", escribir_json("rep.json", rep)])


def test_matrices_de_formas_distintas(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "2"])
    rep = _ok(["repvar", "solve", "--input", ruta, "--dim", "2"])
    rep["matrices"][1] = [[[1.0, 0.0]]]
    _error_de_dominio(["repvar", "restrict", "--input", escribir_json("rep.json", rep)])


def test_conjugador_de_dimension_equivocada(escribir_json):
    ruta = _a_archivo(escribir_json, "libre.json", ["group", "free", "--rank", "1"])
    rep = escribir_json("rep.json", _ok(["repvar", "solve", "--input", ruta, "--dim", "2"]))
    W = escribir_json("w.json", [[[1.0, 0.0]]])
    _error_de_dominio(["repvar", "conjugate", "--input", rep, "--apply", W])


# ============================================================
# TIPOS DESDE --input Y SUPERFICIES SIN PUNTOS REALES
# ============================================================

def test_tipo_desde_documento(escribir_json):
    ruta = escribir_json("t.json", {"g": 2, "k": 3, "a": 0})
    assert _ok(["types", "check", "--input", ruta]) == _ok(["types", "check", "--g", "2", "--k", "3", "--a", "0"])
    ruta = escribir_json("t.json", {"g": 2, "k": 0, "a": 1})
    assert _ok(["surface", "quotient", "--input", ruta]) == {
        "orientable": False, "handles_or_crosscaps": 3, "boundary": 0,
    }


def test_tipo_incompleto(escribir_json):
    _error_de_dominio(["types", "check", "--g", "2", "--k", "3"])
    _error_de_dominio(["surface", "quotient", "--input", escribir_json("t.json", {"g": 2, "k": 3})])


def test_grupo_no_orientable_y_su_nucleo(escribir_json):
    grupo = _ok(["group", "nonorientable", "--crosscaps", "3"])
    assert grupo["generators"] == ["c1", "c2", "c3"]
    assert grupo["augmentation"] == [1, 1, 1]
    nucleo = _ok(["group", "kernel", "--input", escribir_json("g.json", grupo)])
    assert nucleo["abelianization"] == {"free_rank": 4, "torsion": []}


# ============================================================
# EFECTOS SOBRE EL PROCESO
# ============================================================

def test_ayuda_queda_en_el_resultado(capsys):
    resultado = run(["types", "--help"])
    assert resultado.status == "ok" and resultado.payload is None
    assert "enumerate" in resultado.ayuda
    assert capsys.readouterr().out == ""


def test_verbose_no_cambia_el_nivel_global():
    raiz = logging.getLogger()
    previo = raiz.level
    _ok(["--verbose", "types", "count", "--genus", "2"])
    assert raiz.level == previo
