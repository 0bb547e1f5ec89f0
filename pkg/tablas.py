"""
TABLAS - Salidas tabulares (CSV, Excel y tablas de consola)
===========================================================
Un payload es tabular si es:
  - un escalar                       -> una fila, columna "value"
  - un objeto de valores escalares   -> una fila
  - una lista de objetos             -> una fila por objeto
  - un objeto con "rows" (lista de objetos) -> esas filas

Las celdas no escalares (listas de permutaciones, palabras) se escriben
como JSON compacto. Los payloads estructurados (representaciones,
presentaciones) no son tabulares: CSV y Excel los rechazan y la consola
los muestra como pares clave/valor.
"""
import csv
import io
import json
import logging
import os

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter
from rich.markup import escape
from rich.table import Table

import config
from errores import DomainError

log = logging.getLogger(__name__)

ESCALARES = (str, int, float, bool, type(None))

# Colores del encabezado de las hojas exportadas
COLOR_ENCABEZADO = "1F4E78"
COLOR_TEXTO_ENCABEZADO = "FFFFFF"


# ============================================================
# NORMALIZACION A FILAS
# ============================================================

def _celda(valor):
    if isinstance(valor, ESCALARES):
        return valor
    return json.dumps(valor, separators=(",", ":"))


def es_tabular(payload):
    try:
        filas_tabulares(payload)
    except DomainError:
        return False
    return True


def filas_tabulares(payload):
    """
    Convierte un payload en (columnas, filas).

    Returns:
        (lista de nombres de columna, lista de listas de celdas)
    """
    if isinstance(payload, ESCALARES):
        return ["value"], [[payload]]
    if isinstance(payload, dict) and isinstance(payload.get("rows"), list):
        payload = payload["rows"]
    if isinstance(payload, dict):
        if not all(isinstance(v, ESCALARES) for v in payload.values()):
            raise DomainError("payload estructurado: solo hay salida JSON")
        payload = [payload]
    if not isinstance(payload, list) or not all(isinstance(f, dict) for f in payload):
        raise DomainError("payload estructurado: solo hay salida JSON")

    columnas = []
    for fila in payload:
        for clave in fila:
            if clave not in columnas:
                columnas.append(clave)
    filas = [[_celda(fila.get(c)) for c in columnas] for fila in payload]
    return columnas, filas


# ============================================================
# CSV
# ============================================================

def a_csv(payload):
    columnas, filas = filas_tabulares(payload)
    buffer = io.StringIO()
    escritor = csv.writer(buffer, lineterminator="\n")
    escritor.writerow(columnas)
    escritor.writerows(filas)
    return buffer.getvalue()


# ============================================================
# EXCEL (openpyxl)
# ============================================================

def exportar_xlsx(payload, ruta=None, titulo="klein"):
    """
    Escribe el payload tabular en un libro .xlsx.

    Args:
        payload: payload tabular
        ruta: archivo destino; por defecto REPORT_DIR/<titulo>.xlsx
        titulo: nombre de la hoja (y del archivo por defecto)

    Returns:
        ruta absoluta del archivo escrito
    """
    columnas, filas = filas_tabulares(payload)
    if ruta is None:
        os.makedirs(config.REPORT_DIR, exist_ok=True)
        ruta = os.path.join(config.REPORT_DIR, f"{titulo}.xlsx")

    wb = Workbook()
    ws = wb.active
    ws.title = titulo[:31]
    ws.append(columnas)
    for celda in ws[1]:
        celda.font = Font(bold=True, color=COLOR_TEXTO_ENCABEZADO)
        celda.fill = PatternFill("solid", fgColor=COLOR_ENCABEZADO)
        celda.alignment = Alignment(horizontal="center")
    for fila in filas:
        ws.append(fila)

    for i, columna in enumerate(columnas, 1):
        ancho = max([len(str(columna))] + [len(str(f[i - 1])) for f in filas if f[i - 1] is not None])
        ws.column_dimensions[get_column_letter(i)].width = min(ancho + 2, 60)
    ws.freeze_panes = "A2"

    wb.save(ruta)
    log.info("[XLSX] %d filas escritas en %s", len(filas), ruta)
    return os.path.abspath(ruta)


# ============================================================
# CONSOLA (rich)
# ============================================================

def tabla_rich(payload, titulo=""):
    """Tabla rich del payload; los no tabulares se muestran como clave/valor."""
    table = Table(title=titulo.upper() or None, show_lines=True)
    if es_tabular(payload):
        columnas, filas = filas_tabulares(payload)
        for c in columnas:
            table.add_column(str(c), style="bold white" if c == columnas[0] else None, max_width=60)
        for fila in filas:
            table.add_row(*[_texto(v) for v in fila])
        return table

    table.add_column("Campo", style="cyan")
    table.add_column("Valor", max_width=80)
    if isinstance(payload, dict):
        for clave, valor in payload.items():
            table.add_row(str(clave), _texto(_celda(valor)))
    else:
        table.add_row("value", _texto(_celda(payload)))
    return table


def _texto(valor):
    if valor is True:
        return "[green]si[/green]"
    if valor is False:
        return "[red]no[/red]"
    if valor is None:
        return "[dim]-[/dim]"
    return escape(str(valor))
