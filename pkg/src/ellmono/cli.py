"""Command-line front end.

Each command prints a report made of ``KEY=VALUE`` verdict lines. Apart from
the final ``TIME=`` line the report depends only on the inputs. Exit status
is 0 whenever the analysis completes, whatever the verdicts; I/O failures
exit with 1, malformed input with 2, unmet preconditions with 3.
"""
from __future__ import annotations

import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import io
from .errors import LatticeError, ParseError, PreconditionError, UnsupportedError
from .isometry import (Isometry, compose, is_isometry, real_spinor_norm, reflection,
                       is_in_O_prime_k)
from .lattice import (RootSearch, discriminant, is_even, is_unimodular, signature)
from .surfaces import (DEFAULT_HEIGHT, BPSingularity, build_surface_model, calibrated_conventions,
                       embed_milnor,
                       fibre_complement, find_fibre_splitting_roots, find_k3_extra_classes,
                       find_multiple_fibre_span, milnor_lattice)
from .vanishing import (DEFAULT_ORBIT_BOUND, default_pattern, is_complete_vanishing_lattice,
                        orbit_closure, orbit_verdict)

EXIT_IO, EXIT_PARSE, EXIT_PRECONDITION = 1, 2, 3


def _b(x: bool) -> str:
    return "true" if x else "false"


def _vec(v) -> str:
    return json.dumps(list(v.coords), separators=(",", ":"))


def _mat(m) -> str:
    return json.dumps([list(r) for r in m], separators=(",", ":"))


@dataclass
class CommandReport:
    command: str
    digest: str
    lines: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    seconds: float = 0.0

    def add(self, **kv) -> None:
        self.lines.append(" ".join(f"{k}={v}" for k, v in kv.items()))

    def text(self, quiet: bool = False) -> str:
        if quiet:
            return "\n".join(self.lines) + "\n"
        out = [f"COMMAND={self.command}", f"INPUT=sha256:{self.digest}"]
        out += [f"# {n}" for n in self.notes]
        out += self.lines
        out.append(f"TIME={self.seconds:.3f}s")
        return "\n".join(out) + "\n"

    def to_data(self) -> dict:
        return {"command": self.command, "input": f"sha256:{self.digest}",
                "verdicts": self.lines, "notes": self.notes, "payload": self.payload,
                "seconds": round(self.seconds, 3)}


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, Path):
            h.update(p.read_bytes())
        else:
            h.update(str(p).encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def _run(ctx_quiet: bool, output, command: str, inputs: tuple, body) -> None:
    """Run ``body(report)`` with uniform error handling and output."""
    start = time.perf_counter()
    try:
        report = CommandReport(command, _digest(*inputs))
        body(report)
    except ParseError as exc:
        click.echo(f"ERROR: parse: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except OSError as exc:
        click.echo(f"ERROR: io: {exc}", err=True)
        sys.exit(EXIT_IO)
    except (PreconditionError, UnsupportedError) as exc:
        click.echo(f"ERROR: precondition: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)
    except LatticeError as exc:
        click.echo(f"ERROR: input: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    report.seconds = time.perf_counter() - start
    click.echo(report.text(ctx_quiet), nl=False)
    if output:
        try:
            Path(output).write_text(io.dumps(report.to_data()))
        except OSError as exc:
            click.echo(f"ERROR: io: {exc}", err=True)
            sys.exit(EXIT_IO)


def _common(f):
    f = click.option("--quiet", is_flag=True, help="Print verdict lines only.")(f)
    f = click.option("--output", type=click.Path(dir_okay=False),
                     help="Write the full report (with witnesses) as JSON.")(f)
    return f


_file = click.Path(dir_okay=False, path_type=Path)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact lattice checks for monodromy groups of elliptic surfaces."""


@main.command("lattice-info")
@click.argument("lattice", type=_file)
@_common
def lattice_info(lattice, output, quiet):
    """Rank, Gram matrix, signature and discriminant of a lattice file."""
    def body(r: CommandReport):
        l = io.read_lattice(lattice)
        disc = discriminant(l)
        r.add(RANK=l.rank)
        r.add(GRAM=_mat(l.gram))
        r.add(SIGNATURE=signature(l), DET=l.determinant, EVEN=_b(is_even(l)))
        r.add(UNIMODULAR=_b(is_unimodular(l)),
              INVARIANT_FACTORS=json.dumps(disc.invariant_factors, separators=(",", ":")))
        r.payload = io.lattice_to_data(l)
    _run(quiet, output, "lattice-info", (lattice,), body)


@main.command()
@click.argument("lattice", type=_file)
@click.argument("isometry", type=_file)
@click.option("--canonical", type=_file, help="Vector file with the class k that must be fixed.")
@_common
def spinor(lattice, isometry, canonical, output, quiet):
    """Isometry check and real spinor norm of a matrix."""
    def body(r: CommandReport):
        l = io.read_lattice(lattice)
        m = io.read_matrix(isometry)
        k = io.read_vector(canonical, l) if canonical else None
        ok = len(m) == l.rank and is_isometry(m, l)
        fields = {"ISOMETRY": _b(ok)}
        if ok:
            g = Isometry(m, l)
            fields["SPINOR"] = str(real_spinor_norm(g))
            if k is not None:
                fields["FIXES_K"] = _b(g(k) == k)
                fields["IN_O_PRIME_K"] = _b(is_in_O_prime_k(g, k))
        else:
            fields["SPINOR"] = "n/a"
            if k is not None:
                fields["FIXES_K"] = "n/a"
        r.add(**fields)
    inputs = (lattice, isometry) + ((canonical,) if canonical else ())
    _run(quiet, output, "spinor", inputs, body)


@main.command("cvl-check")
@click.argument("lattice", type=_file)
@click.argument("roots", type=_file)
@click.option("--pattern", type=_file, help="Six-vertex pattern file (default: bundled).")
@click.option("--orbit-bound", default=DEFAULT_ORBIT_BOUND, show_default=True,
              help="Maximum number of new roots in the orbit search.")
@click.option("--tuple-bound", default=None, type=int,
              help="Maximum number of nodes in the pattern search (default: unbounded).")
@_common
def cvl_check(lattice, roots, pattern, orbit_bound, tuple_bound, output, quiet):
    """Generation, single-orbit and pattern conditions for a root set."""
    def body(r: CommandReport):
        l = io.read_lattice(lattice)
        d = io.read_roots(roots, l)
        if pattern is None or not pattern.exists():
            p = default_pattern()
            why = "not given" if pattern is None else f"{pattern} not found"
            r.notes.append(f"pattern file {why}; bundled default pattern used")
            r.add(PATTERN="default")
        else:
            p = io.read_pattern(pattern)
            r.add(PATTERN="file")
        rep = is_complete_vanishing_lattice(l, d, p, orbit_bound, tuple_bound)
        r.add(ROOTS=len(d), ORBIT_BOUND=orbit_bound,
              TUPLE_BOUND=tuple_bound if tuple_bound is not None else "none")
        r.lines.append(rep.verdict_line())
        r.add(OVERALL=rep.overall.replace(" (", "_").replace(")", "").replace(" ", "_"))
        if rep.witness is not None:
            r.add(WITNESS=json.dumps(list(rep.witness), separators=(",", ":")))
        cert = rep.certificate
        if cert is not None:
            r.add(ORBIT_SIZE=len(cert.generator_log) + 1, NEW_ROOTS=cert.new_roots,
                  CLOSED=_b(cert.closed), DEPTH=cert.bfs_depth)
        r.payload = {"witness": list(rep.witness) if rep.witness else None,
                     "pattern": [list(x) for x in p.gram_pattern]}
    given = (pattern,) if pattern is not None and pattern.exists() else ()
    inputs = (lattice, roots) + given + (orbit_bound, tuple_bound)
    _run(quiet, output, "cvl-check", inputs, body)


@main.command()
@click.argument("lattice", type=_file)
@click.argument("roots", type=_file)
@click.option("--seed", default=0, show_default=True, help="Index of the starting root.")
@click.option("--orbit-bound", default=DEFAULT_ORBIT_BOUND, show_default=True)
@_common
def orbit(lattice, roots, seed, orbit_bound, output, quiet):
    """Orbit of one root under the reflections in a root set."""
    def body(r: CommandReport):
        l = io.read_lattice(lattice)
        d = io.read_roots(roots, l)
        if not 0 <= seed < len(d):
            raise ParseError(f"seed {seed} out of range for {len(d)} roots")
        closure, cert = orbit_closure(d, seed, orbit_bound)
        r.add(ORBIT_SIZE=len(closure), NEW_ROOTS=cert.new_roots, CLOSED=_b(cert.closed),
              DEPTH=cert.bfs_depth)
        r.add(REACHED=f"{sum(cert.reached)}/{len(cert.reached)}", VERDICT=orbit_verdict(cert))
        r.payload = {"seed": seed, "reached": list(cert.reached),
                     "generator_log": [list(x) for x in cert.generator_log]}
    _run(quiet, output, "orbit", (lattice, roots, seed, orbit_bound), body)


@main.command()
@click.argument("exponents", nargs=-1, type=int, required=True)
@click.option("--pg", type=int, help="Compare with the L' lattice of this surface model.")
@_common
def milnor(exponents, pg, output, quiet):
    """Milnor lattice of x^a + y^b + z^c on the Pham basis."""
    def body(r: CommandReport):
        conv = calibrated_conventions()
        r.add(CALIBRATION="pass" if conv else "fail")
        m = milnor_lattice(BPSingularity(tuple(exponents)))
        r.add(RANK=m.rank, SIGNATURE=signature(m), DET=m.determinant, EVEN=_b(is_even(m)))
        if pg is not None:
            v = embed_milnor(build_surface_model(pg), m)
            r.add(MILNOR_MATCH=_b(v.match))
            r.notes.append("match means " + v.basis)
        r.payload = io.lattice_to_data(m)
    _run(quiet, output, "milnor", tuple(exponents) + (pg,), body)


SPOT_CHECK_WORDS = 20
SPOT_CHECK_LENGTH = 6


@main.command()
@click.argument("pg", type=int, required=False)
@click.argument("multiplicities", nargs=-1, type=int)
@click.option("--descriptor", type=_file,
              help='Surface file {"pg": n, "multiplicities": [...]} instead of PG MULTS.')
@click.option("--height", default=DEFAULT_HEIGHT, show_default=True,
              help="Coordinate bound for the witness searches.")
@_common
def surface(pg, multiplicities, descriptor, height, output, quiet):
    """Model lattice, witnesses and Milnor comparison for an elliptic surface."""
    if descriptor is not None and (pg is not None or multiplicities):
        raise click.UsageError("give either PG [MULTS...] or --descriptor, not both")
    if descriptor is None and pg is None:
        raise click.UsageError("missing PG (or --descriptor FILE)")

    def body(r: CommandReport):
        nonlocal pg, multiplicities
        if descriptor is not None:
            pg, multiplicities = io.read_surface(descriptor)
        s = build_surface_model(pg, multiplicities)
        l = s.lattice
        r.add(PG=s.pg, Q=s.q, CHI=s.chi, M=s.m,
              MULTIPLICITIES=json.dumps(list(s.multiplicities), separators=(",", ":")))
        r.add(RANK=l.rank, SIGNATURE=signature(l), EVEN=_b(is_even(l)), DET=l.determinant)
        r.add(K=f"{s.k_scalar}e", F=f"{s.m}e", K_SQUARE=s.k.square, K_DOT_F=s.k.dot(s.f))
        for mi, cls in s.fibres:
            r.add(**{f"FIBRE_{mi}": f"{s.m // mi}e"})
        if s.sigma is not None:
            r.add(SIGMA=_vec(s.sigma), SIGMA_SQUARE=s.sigma.square, SIGMA_DOT_F=s.sigma.dot(s.f))
        fc = fibre_complement(s)
        r.add(FIBRE_COMPLEMENT_RANK=fc.lattice.rank, RADICAL=_vec(fc.radical),
              RADICAL_PRIMITIVE=_b(fc.radical_primitive))
        lp = fc.lprime
        r.add(LPRIME_RANK=lp.rank, LPRIME_SIGNATURE=signature(lp), LPRIME_EVEN=_b(is_even(lp)),
              LPRIME_DET=lp.determinant)
        sing = BPSingularity.e_series(s.chi)
        v = embed_milnor(s, milnor_lattice(sing))
        r.add(MILNOR=f"({','.join(map(str, sing.exponents))})", MILNOR_MATCH=_b(v.match))
        r.notes.append("MILNOR_MATCH compares " + v.basis)

        payload = {"model": io.surface_to_data(s)}
        split = find_fibre_splitting_roots(s, height)
        if split:
            r.add(SPLITTING="found", ALPHA=_vec(split[0]), ALPHA_PRIME=_vec(split[1]))
            payload["splitting"] = [list(x.coords) for x in split]
        else:
            r.add(SPLITTING="none_within_height")
        for mi in sorted(set(s.multiplicities)):
            w = find_multiple_fibre_span(s, mi, height)
            key = f"MULTIPLE_FIBRE_{mi}"
            if w:
                r.add(**{key: "found", f"{key}_ALPHA": _vec(w[0]), f"{key}_ALPHA_PRIME": _vec(w[1])})
                payload[key.lower()] = [list(x.coords) for x in w]
            else:
                r.add(**{key: "none_within_height"})
        if s.is_k3:
            w = find_k3_extra_classes(s, height)
            if w:
                r.add(K3_EXTRA="found", K3_ALPHA=_vec(w[0]), K3_ALPHA_PRIME=_vec(w[1]),
                      K3_SIGMA=_vec(w[2]))
                payload["k3_extra"] = [list(x.coords) for x in w]
            else:
                r.add(K3_EXTRA="none_within_height")
        passed, total = _spot_check(s, split, height)
        r.add(O_PRIME_K_SPOT_CHECK=f"{passed}/{total}")
        r.payload = payload
    inputs = (descriptor,) if descriptor is not None else (pg,) + tuple(multiplicities)
    _run(quiet, output, "surface", inputs + (height,), body)


def _spot_check(s, split, height) -> tuple[int, int]:
    """Random words in reflections in roots orthogonal to ``k``; fixed seed."""
    if height <= 0:
        return 0, 0
    rng = random.Random(0)
    search = RootSearch(s.lattice, -2, height=min(height, 2), constraints=[(s.k, 0)])
    pool = list(split or ())
    for _ in range(10):
        v = search.sample(rng)
        if v is not None:
            pool.append(v)
    if not pool:
        return 0, 0
    refl = [reflection(v) for v in pool]
    passed = 0
    for _ in range(SPOT_CHECK_WORDS):
        g = refl[rng.randrange(len(refl))]
        for _ in range(rng.randrange(SPOT_CHECK_LENGTH)):
            g = compose(g, refl[rng.randrange(len(refl))])
        passed += is_in_O_prime_k(g, s.k)
    return passed, SPOT_CHECK_WORDS


if __name__ == "__main__":
    main()
