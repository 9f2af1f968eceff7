"""Command-line interface: ``ecgw audit|chain|sdot|k0 ...``.

Exit status is 0 on success, 1 when a checked property fails and 2 on usage
or input errors.
"""

import functools
import json
import sys

import click

from .errors import EcgwError, ParseError, ValidationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dump(value):
    click.echo(json.dumps(value, sort_keys=True, indent=2, ensure_ascii=False))


def _guard(fn):
    """Map input errors to exit status 2 and pass through the command's
    own status."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (ParseError, ValidationError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except EcgwError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(code or EXIT_OK)

    return wrapper


def _instance(spec):
    """Category for ``finset``, ``chain`` or ``mset:<table-file>``."""
    from .cgw import ExtensiveCGW
    from .chain import CHAIN
    from .extcat import FinSetInstance, Monoid, MSetInstance

    if spec == "finset":
        return ExtensiveCGW(FinSetInstance())
    if spec == "chain":
        return CHAIN
    if spec.startswith("mset:"):
        path = spec[5:]
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read monoid table {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"monoid table {path} is not valid JSON: {exc}") from None
        try:
            return ExtensiveCGW(MSetInstance(Monoid.from_json(data)))
        except (ValueError, KeyError, TypeError) as exc:
            raise ValidationError(f"monoid {path}", str(exc)) from None
    raise click.BadParameter(f"unknown instance {spec!r}", param_hint="--instance")


def _report(report, as_json):
    if as_json:
        _dump(report.to_json())
    else:
        click.echo(report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


seed_option = click.option("--seed", type=int, default=0, envvar="ECGW_SEED", show_default=True, help="Random seed (ECGW_SEED).")
trials_option = click.option("--trials", type=int, default=100, show_default=True)
jobs_option = click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
json_option = click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
file_option = click.option("--file", "path", type=click.Path(dir_okay=False), required=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Executable checks for CGW and ECGW categories of finite sets,
    M-sets and chain complexes."""


# ---------------------------------------------------------------------------
# audit


SUITES = ("axioms", "appendix", "acyclicity", "criterion", "sdot", "k0", "all")


@cli.command()
@click.option("--instance", default="finset", show_default=True, help="finset, chain or mset:<table-file>.")
@click.option("--suite", type=click.Choice(SUITES), default="axioms", show_default=True)
@trials_option
@seed_option
@jobs_option
@json_option
@_guard
def audit(instance, suite, trials, seed, jobs, as_json):
    """Run a randomized property suite."""
    from .cgw import appendix_audit
    from .cgw import audit as axiom_audit
    from .exactqi import acyclicity_audit, criterion_audit
    from .k0 import gw_audit, relation_audit
    from .sdot import sdot_audit

    if trials < 1:
        raise click.BadParameter("must be at least 1", param_hint="--trials")
    cat = _instance(instance)
    runners = {
        "axioms": lambda: axiom_audit(cat, trials, seed, jobs=jobs),
        "appendix": lambda: appendix_audit(cat, trials, seed, jobs=jobs),
        "acyclicity": lambda: acyclicity_audit(trials, seed, jobs=jobs),
        "criterion": lambda: criterion_audit(trials, seed, jobs=jobs),
        "sdot": lambda: sdot_audit(cat, trials, seed, jobs=jobs),
        "k0": lambda: gw_audit(trials, seed, jobs=jobs),
    }
    names = [s for s in SUITES[:-1]] if suite == "all" else [suite]
    status = EXIT_OK
    for k, name in enumerate(names):
        if name in ("acyclicity", "criterion", "k0") and instance != "chain" and suite == "all":
            continue
        if k and not as_json:
            click.echo("")
        status = max(status, _report(runners[name](), as_json))
    return status


# ---------------------------------------------------------------------------
# chain


@cli.group()
def chain():
    """Chain complexes stored in a document."""


def _load(path):
    from .document import load

    return load(path)


@chain.command("validate")
@file_option
@click.option("--complex", "name", default=None, help="Only this complex.")
@_guard
def chain_validate(path, name):
    """Validate a document; print one line per complex."""
    try:
        doc = _load(path)
    except ValidationError as exc:
        click.echo(f"invalid {exc}")
        return EXIT_FAIL
    names = [name] if name else sorted(doc.complexes)
    for n in names:
        doc.get("complexes", n)
        click.echo(f"valid {n}")
    return EXIT_OK


def _map_result(f, complement):
    Z, g = complement(f)
    _dump({"complex": Z.to_json(), "map": g.to_json()})
    return EXIT_OK


@chain.command("coker")
@file_option
@click.option("--map", "name", required=True)
@_guard
def chain_coker(path, name):
    """Cokernel of a chain m-map."""
    from .chain import coker_chain

    f = _load(path).get("chain_maps", name)
    if f.kind != "m":
        raise ValidationError(f"chain_maps.{name}", "cokernels need an m-map")
    return _map_result(f, coker_chain)


@chain.command("ker")
@file_option
@click.option("--map", "name", required=True)
@_guard
def chain_ker(path, name):
    """Kernel of a chain e-map."""
    from .chain import ker_chain

    f = _load(path).get("chain_maps", name)
    if f.kind != "e":
        raise ValidationError(f"chain_maps.{name}", "kernels need an e-map")
    return _map_result(f, ker_chain)


@chain.command("qiso")
@file_option
@click.option("--map", "name", required=True)
@_guard
def chain_qiso(path, name):
    """Print whether a chain map is a quasi-isomorphism."""
    from .exactqi import is_quasi_iso

    click.echo("true" if is_quasi_iso(_load(path).get("chain_maps", name)) else "false")
    return EXIT_OK


@chain.command("homology")
@file_option
@click.option("--complex", "name", required=True)
@click.option("--degree", type=int, default=None)
@_guard
def chain_homology(path, name, degree):
    """Homology sets of a complex."""
    from .exactqi import homology

    X = _load(path).get("complexes", name)
    degrees = [degree] if degree is not None else list(X.window_range())
    _dump({str(i): list(homology(X, i).elements) for i in degrees})
    return EXIT_OK


@chain.command("exact")
@file_option
@click.option("--complex", "name", required=True)
@_guard
def chain_exact(path, name):
    """Print whether a complex is exact, with the first failing degree."""
    from .exactqi import is_exact

    cert = is_exact(_load(path).get("complexes", name))
    click.echo("true" if cert else f"false: degree {cert.index}: {cert.reason}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sdot


@cli.group()
def sdot():
    """Staircases of finite sets."""


def _staircase(path, name):
    from .cgw import ExtensiveCGW
    from .extcat import FinSetInstance
    from .sdot import staircase_build

    cat = ExtensiveCGW(FinSetInstance())
    row = [cat.arrow(f.dom, f.cod, f.assignment, "m") for f in _load(path).get("staircases", name)]
    return staircase_build(cat, row)


def _emit(S, dot):
    if dot:
        click.echo(S.to_dot(), nl=False)
    else:
        _dump(S.to_json())
    return EXIT_OK


dot_option = click.option("--dot", is_flag=True, help="Print Graphviz text instead of JSON.")
staircase_option = click.option("--staircase", "name", required=True)


@sdot.command("build")
@file_option
@staircase_option
@dot_option
@_guard
def sdot_build(path, name, dot):
    """Build the staircase of a stored row."""
    return _emit(_staircase(path, name), dot)


@sdot.command("face")
@file_option
@staircase_option
@click.option("--index", type=int, required=True)
@dot_option
@_guard
def sdot_face(path, name, index, dot):
    """Apply a face map."""
    from .sdot import face

    return _emit(face(_staircase(path, name), index), dot)


@sdot.command("degeneracy")
@file_option
@staircase_option
@click.option("--index", type=int, required=True)
@dot_option
@_guard
def sdot_degeneracy(path, name, index, dot):
    """Apply a degeneracy map."""
    from .sdot import degeneracy

    return _emit(degeneracy(_staircase(path, name), index), dot)


@sdot.command("identities")
@click.option("--file", "path", type=click.Path(dir_okay=False), default=None)
@click.option("--staircase", "name", default=None)
@click.option("--instance", default="finset", show_default=True)
@trials_option
@seed_option
@jobs_option
@json_option
@_guard
def sdot_identities(path, name, instance, trials, seed, jobs, as_json):
    """Check the simplicial identities on a stored staircase, or on random
    ones when no file is given."""
    from .sdot import IDENTITY_NAMES, SDOT_CHECKS, sdot_audit, simplicial_identities

    if path:
        if not name:
            raise click.BadParameter("needed with --file", param_hint="--staircase")
        res = simplicial_identities(_staircase(path, name))
        for k in IDENTITY_NAMES:
            mark = "PASS" if all(res[k]) else "FAIL"
            click.echo(f"{mark} {k} instances={len(res[k])}")
        return EXIT_OK if all(all(v) for v in res.values()) else EXIT_FAIL
    checks = [c for c in SDOT_CHECKS if c[0].startswith("identity:")]
    return _report(sdot_audit(_instance(instance), trials, seed, jobs=jobs, checks=checks), as_json)


# ---------------------------------------------------------------------------
# k0


@cli.group()
def k0():
    """Euler characteristics and K0 relations."""


@k0.command("euler")
@file_option
@click.option("--complex", "name", default=None)
@_guard
def k0_euler(path, name):
    """Euler characteristic of stored complexes."""
    from .chain import euler_char

    doc = _load(path)
    names = [name] if name else sorted(doc.complexes)
    for n in names:
        click.echo(f"{n} {euler_char(doc.get('complexes', n))}")
    return EXIT_OK


@k0.command("gw")
@file_option
@click.option("--window", nargs=2, type=int, required=True, help="Support window LO HI.")
@trials_option
@seed_option
@jobs_option
@_guard
def k0_gw(path, window, trials, seed, jobs):
    """Table of Euler characteristics and degree/image vectors, then the
    degree-vector and image-vector audit."""
    from .chain import euler_char
    from .exactqi import is_exact
    from .k0 import degree_vector, gw_audit, image_vector

    a, b = window
    doc = _load(path)
    click.echo("complex chi degree_vector image_vector")
    for n in sorted(doc.complexes):
        X = doc.complexes[n]
        dv = "[" + ",".join(str(len(s)) for s in degree_vector(X, a, b)) + "]"
        iv = "[" + ",".join(str(len(s)) for s in image_vector(X, a, b)) + "]" if is_exact(X) else "-"
        click.echo(f"{n} {euler_char(X)} {dv} {iv}")
    click.echo("")
    report = gw_audit(trials, seed, jobs=jobs)
    return _report(report, False)


@k0.command("relations")
@click.option("--instance", type=click.Choice(["finset", "chain"]), default="finset", show_default=True)
@trials_option
@seed_option
@jobs_option
@json_option
@_guard
def k0_relations(instance, trials, seed, jobs, as_json):
    """Sample K0 relations and check the invariant respects them."""
    from .k0 import relation_audit

    return _report(relation_audit(instance, trials, seed, jobs=jobs), as_json)


def main(argv=None):
    """Console entry point."""
    cli.main(args=argv, prog_name="ecgw")


if __name__ == "__main__":
    main()
