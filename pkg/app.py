#!/usr/bin/env python3
"""
twistkit: exact checks and constructions for twisted complexes (click CLI).

- Config via .env (TWISTKIT_FIELD, TWISTKIT_MAX_WORD, TWISTKIT_THREADS,
  TWISTKIT_LOG_MAX, TWISTKIT_SEED)
- Every command reads .dgj documents and prints one JSON report on stdout
- Exit 0 when the checked identities hold, 1 on a mathematical failure
  (the report carries a witness), 2 on bad input
- --out writes the constructed document (convolution, bar, bicomplex, transfer)
- --verbose echoes the workbench log to stderr after the command
"""
import json
import sys
from typing import Callable, Optional

import click
from dotenv import load_dotenv

# Load .env if present
load_dotenv()

from twistkit_core import TwistkitError, dump, workbench  # noqa: E402

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


def _echo_logs(verbose: bool) -> None:
    if verbose:
        for line in workbench.get_logs(limit=0):
            click.echo(line, err=True)


def _run(command: str, action: Callable[[], object], out: Optional[str] = None, verbose: bool = False) -> None:
    """Run one workbench action and turn its outcome into JSON plus an exit code."""
    try:
        result = action()
        if isinstance(result, tuple):
            report, document = result
            if out:
                dump(document, out)
                workbench._append_log(f"Wrote {out}")
        else:
            report = result
    except TwistkitError as e:
        body = {"command": command, "status": "error", "detail": e.detail}
        if e.witness:
            body["witness"] = e.witness
        _emit(body)
        _echo_logs(verbose)
        sys.exit(EXIT_ERROR)
    except OSError as e:
        _emit({"command": command, "status": "error", "detail": f"cannot write {out}: {e.strerror}"})
        _echo_logs(verbose)
        sys.exit(EXIT_ERROR)
    _emit(report.as_dict())
    _echo_logs(verbose)
    sys.exit(EXIT_PASS if report.ok else EXIT_FAIL)


def common_options(fn):
    fn = click.option("--verbose", is_flag=True, help="Echo the log to stderr.")(fn)
    fn = click.option("--name", default=None, help="Entity to use when the document holds several.")(fn)
    fn = click.option("--field", default=None, help="Field for documents that declare none: q or fp:P.")(fn)
    return fn


window_option = click.option("--window", type=(int, int), default=None, metavar="LO HI",
                       help="Index window.")
cell_window_option = click.option("--window", type=(int, int, int, int), default=None, metavar="ILO IHI JLO JHI",
                       help="Cell window of a bicomplex.")
max_word_option = click.option("--max-word", type=int, default=None, metavar="N",
                        help="Longest word checked (default: arity bound + 3).")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the result here.")


@click.group()
def cli():
    """Exact-arithmetic kernel for twisted complexes, A-infinity structures and homotopy transfer."""


# ---------- check ----------

@cli.group()
def check():
    """Check the defining identities of a document entity."""


@check.command("dg")
@click.argument("path", type=click.Path(dir_okay=False))
@common_options
def check_dg(path, field, name, verbose):
    _run("check dg", lambda: workbench.check_dg(path, name=name, field=field), verbose=verbose)


@check.command("twisted")
@click.argument("path", type=click.Path(dir_okay=False))
@window_option
@common_options
def check_twisted(path, window, field, name, verbose):
    _run("check twisted", lambda: workbench.check_twisted(path, window, name=name, field=field), verbose=verbose)


@check.command("bitwisted")
@click.argument("path", type=click.Path(dir_okay=False))
@cell_window_option
@common_options
def check_bitwisted(path, window, field, name, verbose):
    _run("check bitwisted", lambda: workbench.check_bitwisted(path, window, name=name, field=field),
         verbose=verbose)


# ---------- convolution and bicomplexes ----------

@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@window_option
@click.option("--degrees", type=(int, int), default=None, metavar="LO HI",
              help="Total degrees to keep from a streamed complex.")
@out_option
@common_options
def convolve(path, window, degrees, out, field, name, verbose):
    """Convolution of a twisted complex over Ch."""
    _run("convolve", lambda: workbench.convolve(path, window, degrees, name=name, field=field), out, verbose)


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--mode", required=True,
              type=click.Choice(["row", "col", "reflect", "sigma", "row-inverse", "col-inverse"]))
@cell_window_option
@out_option
@common_options
def rowcol(path, mode, window, out, field, name, verbose):
    """cxrow / cxcol of a complex of complexes, reflect / sigma of a bicomplex, and the inverses."""
    _run("rowcol", lambda: workbench.rowcol(path, mode, window, name=name, field=field), out, verbose)


# ---------- A-infinity ----------

@cli.group()
def ainfty():
    """A-infinity algebras, modules and their morphisms through bar constructions."""


@ainfty.command("check-algebra")
@click.argument("path", type=click.Path(dir_okay=False))
@max_word_option
@common_options
def check_algebra(path, max_word, field, name, verbose):
    _run("ainfty check-algebra", lambda: workbench.check_algebra(path, max_word, name=name, field=field),
         verbose=verbose)


@ainfty.command("check-module")
@click.argument("path", type=click.Path(dir_okay=False))
@max_word_option
@common_options
def check_module(path, max_word, field, name, verbose):
    _run("ainfty check-module", lambda: workbench.check_module(path, max_word, name=name, field=field),
         verbose=verbose)


@ainfty.command("check-morphism")
@click.argument("path", type=click.Path(dir_okay=False))
@max_word_option
@common_options
def check_morphism(path, max_word, field, name, verbose):
    _run("ainfty check-morphism", lambda: workbench.check_morphism(path, max_word, name=name, field=field),
         verbose=verbose)


@ainfty.command("bar")
@click.argument("path", type=click.Path(dir_okay=False))
@window_option
@max_word_option
@out_option
@common_options
def bar(path, window, max_word, out, field, name, verbose):
    """Bar construction truncated to an index window."""
    _run("ainfty bar", lambda: workbench.bar(path, window, max_word, name=name, field=field), out, verbose)


# ---------- transfer ----------

@cli.command()
@click.argument("paths", nargs=-1, required=True)
@max_word_option
@click.option("--onto-homology", is_flag=True, help="Use the standard retract of the module's complex onto homology.")
@out_option
@common_options
def transfer(paths, max_word, onto_homology, out, field, name, verbose):
    """transfer MODULE [RETRACT], or transfer verify MODULE [RETRACT]."""
    verify = paths[0] == "verify"
    files = paths[1:] if verify else paths
    command = "transfer verify" if verify else "transfer"
    if not 1 <= len(files) <= 2:
        _emit({"command": command, "status": "error", "detail": "expected a module document and at most one retract"})
        sys.exit(EXIT_ERROR)
    module_path = files[0]
    retract_path = files[1] if len(files) == 2 else None
    if verify:
        _run(command, lambda: workbench.verify_transfer(
            module_path, retract_path, max_word, onto_homology, name=name, field=field), verbose=verbose)
    else:
        _run(command, lambda: workbench.transfer(
            module_path, retract_path, max_word, onto_homology, name=name, field=field), out, verbose)


# ---------- selftest ----------

@cli.command()
@click.option("--seed", type=int, default=None, help="Seed of the instance generator.")
@click.option("--count", type=int, default=None,
              help="Instances per family; defaults to 200 for twisted_d2 and 100 for the others.")
@click.option("--family", "families", multiple=True,
              type=click.Choice(["twisted_d2", "convolution", "diagrams", "transfer"]))
@click.option("--field", default=None, help="q or fp:P.")
@click.option("--verbose", is_flag=True)
def selftest(seed, count, families, field, verbose):
    """Run the randomized property families and report the first failure."""
    _run("selftest", lambda: workbench.selftest(seed, count, field, families or None), verbose=verbose)


if __name__ == "__main__":
    cli()
