"""Random well-typed surface signatures for the property suites.

The generator emits surface *text* so each sample exercises the whole
pipeline: lexer, parser, elaborator, and all four translations.  Every
choice keeps the signature well-typed by construction — terms are drawn
only from pools the generator has already populated, and eliminator
declarations use fixed always-well-typed shapes:

* a constant motive ``(x z. C)`` over an inhabited code ``C``;
* the endpoint motive ``(x z. t = x)``, reached through the composition
  sugar ``p * q`` and through an equality-producing function ``g``;
* the eliminator over type-constructor equalities with motive
  ``(X z. X)`` (coercion along a large path);
* computation witnesses ``Jbeta …`` for both equality formers.

The eliminator shapes dominate translation cost (their section
translations build large correction towers), so their weights are kept
low and at most one heavy shape appears per signature.
"""
from __future__ import annotations

import random

MAX_SIG_DECLS = 6
MAX_BINDERS = 3  # per declared type; overall type depth stays within 5


def _paren(term: str) -> str:
    return f"({term})" if " " in term else term


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.lines: list[str] = []
        self.n = 0  # shared suffix counter so every name is distinct
        self.ext_sets: list[str] = []
        self.ext_elems: dict[str, list[str]] = {}
        self.sorts: list[str] = []
        self.fams: list[tuple[str, str, str]] = []  # (name, 'ext'|'sort', index)
        self.points: dict[str, list[str]] = {}
        self.atoms: dict[str, list[str]] = {}
        self.paths: dict[str, list[tuple[str, str, str]]] = {}
        self.binder_paths: dict[str, list[tuple[str, str]]] = {}
        self.large_paths: list[tuple[str, str, str]] = []
        self.inf_terms: dict[tuple[str, str], list[str]] = {}
        self.heavy_used = False

    def fresh(self, prefix: str) -> str:
        name = f"{prefix}{self.n}"
        self.n += 1
        return name

    # -- external assumptions ------------------------------------------------

    def gen_assume(self) -> None:
        rng = self.rng
        parts: list[str] = []
        for _ in range(rng.choice((0, 0, 1, 1, 2))):
            s = self.fresh("X")
            self.ext_sets.append(s)
            self.ext_elems[s] = []
            parts.append(f"({s} : Set)")
            if rng.random() < 0.7:
                e = self.fresh("x")
                self.ext_elems[s].append(e)
                parts.append(f"({e} : {s})")
        if parts:
            self.lines.append("assume " + " ".join(parts) + ";")

    # -- declaration makers; return False when prerequisites are missing ----

    def decl_sort(self) -> bool:
        if len(self.sorts) >= 4:
            return False
        name = self.fresh("T")
        self.sorts.append(name)
        for pool in (self.points, self.atoms, self.paths, self.binder_paths):
            pool[name] = []
        self.lines.append(f"{name} : U;")
        return True

    def decl_fam(self) -> bool:
        rng = self.rng
        indices = [("ext", s) for s in self.ext_sets] + [
            ("sort", s) for s in self.sorts
        ]
        if not indices or len(self.fams) >= 2:
            return False
        kind, idx = rng.choice(indices)
        name = self.fresh("F")
        self.fams.append((name, kind, idx))
        self.lines.append(f"{name} : {idx} -> U;")
        return True

    def _binders(self) -> tuple[list[str], list[str | None]]:
        """A telescope of binder sources plus how to instantiate each one.

        The second list holds one argument term per binder, or ``None``
        when no closed inhabitant is available (the constructor then never
        enters the point pools).
        """
        rng = self.rng
        kinds = []
        if self.ext_sets:
            kinds += ["ext", "ext"]
        if self.sorts:
            kinds += ["ind", "ind"]
        if self.ext_sets and self.sorts:
            kinds.append("inf")
        sort_fams = [f for f in self.fams if f[1] == "sort"]
        if sort_fams:
            kinds.append("fam_pair")
        srcs: list[str] = []
        args: list[str | None] = []
        budget = rng.choice((0, 0, 1, 1, 2, MAX_BINDERS))
        while kinds and len(srcs) < budget:
            kind = rng.choice(kinds)
            if kind == "ext":
                s = rng.choice(self.ext_sets)
                if rng.random() < 0.5:
                    srcs.append(f"({self.fresh('x')} : {s})")
                else:
                    srcs.append(s)
                elems = self.ext_elems[s]
                args.append(rng.choice(elems) if elems else None)
            elif kind == "ind":
                t = rng.choice(self.sorts)
                if rng.random() < 0.5:
                    srcs.append(f"({self.fresh('y')} : {t})")
                else:
                    srcs.append(t)
                pool = self.points[t]
                args.append(_paren(rng.choice(pool)) if pool else None)
            elif kind == "inf":
                s = rng.choice(self.ext_sets)
                t = rng.choice(self.sorts)
                if rng.random() < 0.5:
                    srcs.append(f"(({self.fresh('z')} : {s}) -> {t})")
                else:
                    srcs.append(f"({s} -> {t})")
                pool = self.inf_terms.get((s, t), [])
                args.append(rng.choice(pool) if pool else None)
            else:  # fam_pair: a sort binder and a family instance over it
                fam, _, idx = rng.choice(sort_fams)
                g = self.fresh("y")
                srcs.append(f"({g} : {idx})")
                srcs.append(f"({self.fresh('y')} : {fam} {g})")
                args.extend((None, None))
                break
        return srcs, args

    def decl_point(self) -> bool:
        rng = self.rng
        target_fams = [
            f
            for f in self.fams
            if (f[1] == "ext" and self.ext_elems[f[2]])
            or (f[1] == "sort")
        ]
        if not self.sorts and not target_fams:
            return False
        name = self.fresh("c")
        if target_fams and rng.random() < 0.3:
            fam, kind, idx = rng.choice(target_fams)
            if kind == "ext" and rng.random() < 0.5:
                e = rng.choice(self.ext_elems[idx])
                self.lines.append(f"{name} : {fam} {e};")
            else:
                v = self.fresh("x" if kind == "ext" else "y")
                self.lines.append(f"{name} : ({v} : {idx}) -> {fam} {v};")
            return True
        target = rng.choice(self.sorts)
        srcs, args = self._binders()
        ty = " -> ".join(srcs + [target])
        self.lines.append(f"{name} : {ty};")
        if not srcs:
            self.atoms[target].append(name)
            self.points[target].append(name)
        elif all(a is not None for a in args):
            self.points[target].append(name + " " + " ".join(args))  # type: ignore[arg-type]
        if len(srcs) == 1 and (
            srcs[0] in self.ext_sets or srcs[0].split(" : ")[-1][:-1] in self.ext_sets
        ):
            s = srcs[0] if srcs[0] in self.ext_sets else srcs[0].split(" : ")[-1][:-1]
            self.inf_terms.setdefault((s, target), []).append(name)
        return True

    def decl_small_path(self) -> bool:
        rng = self.rng
        inhabited = [t for t in self.sorts if self.points[t]]
        if not inhabited:
            return False
        t = rng.choice(inhabited)
        name = self.fresh("p")
        form = rng.random()
        if form < 0.55:
            lhs = rng.choice(self.points[t])
            rhs = lhs if rng.random() < 0.5 else rng.choice(self.points[t])
            self.lines.append(f"{name} : {lhs} = {rhs};")
            self.paths[t].append((name, lhs, rhs))
        elif form < 0.8 and self.atoms[t]:
            base = rng.choice(self.atoms[t])
            v = self.fresh("y")
            self.lines.append(f"{name} : ({v} : {t}) -> {base} = {v};")
            self.binder_paths[t].append((name, base))
        else:
            v, w = self.fresh("y"), self.fresh("y")
            self.lines.append(f"{name} : ({v} : {t}) -> ({w} : {t}) -> {v} = {w};")
        return True

    def decl_large_path(self) -> bool:
        if not self.sorts:
            return False
        rng = self.rng
        lhs = rng.choice(self.sorts)
        rhs = rng.choice(self.sorts)
        name = self.fresh("q")
        self.lines.append(f"{name} : {lhs} = {rhs};")
        self.large_paths.append((name, lhs, rhs))
        return True

    # -- eliminator shapes ---------------------------------------------------

    def decl_compose(self) -> bool:
        if self.heavy_used:
            return False
        rng = self.rng
        for t in rng.sample(self.sorts, len(self.sorts)):
            chains = [
                (p, q)
                for p in self.paths[t]
                for q in self.paths[t]
                if p[2] == q[1]
            ]
            if not chains:
                continue
            p, q = rng.choice(chains)
            name = self.fresh("w")
            if p[1] == p[2] == q[1] == q[2] and rng.random() < 0.5:
                self.lines.append(f"{name} : {p[0]} * {q[0]} = {q[0]} * {p[0]};")
            else:
                self.lines.append(f"{name} : {p[0]} * {q[0]} = {p[0]} * {q[0]};")
            self.heavy_used = True
            return True
        return False

    def decl_j_const(self) -> bool:
        rng = self.rng
        with_paths = [t for t in self.sorts if self.paths[t]]
        with_atoms = [t for t in self.sorts if self.atoms[t]]
        if not with_paths or not with_atoms:
            return False
        e = rng.choice(self.paths[rng.choice(with_paths)])[0]
        c_sort = rng.choice(with_atoms)
        c = rng.choice(self.atoms[c_sort])
        name = self.fresh("d")
        self.lines.append(f"{name} : Id {c_sort} (J (x z. {c_sort}) {c} {e}) {c};")
        return True

    def decl_ju(self) -> bool:
        rng = self.rng
        usable = [lp for lp in self.large_paths if self.atoms[lp[1]]]
        if not usable:
            return False
        q, lhs, rhs = rng.choice(usable)
        c = rng.choice(self.atoms[lhs])
        name = self.fresh("d")
        j = f"J (X z. X) {c} {q}"
        self.lines.append(f"{name} : Id {rhs} ({j}) ({j});")
        return True

    def decl_jbeta(self) -> bool:
        if self.heavy_used:
            return False
        rng = self.rng
        loops = [
            (t, p)
            for t in self.sorts
            for p in self.paths[t]
            if p[1] == p[2] and p[1] in self.atoms[t]
        ]
        if not loops:
            return False
        t, (p, base, _) = rng.choice(loops)
        name = self.fresh("w")
        jb = f"Jbeta (x z. {base} = x) {base} {p}"
        self.lines.append(f"{name} : {jb} = {jb};")
        self.heavy_used = True
        return True

    def decl_jbetau(self) -> bool:
        if self.heavy_used:
            return False
        rng = self.rng
        with_atoms = [t for t in self.sorts if self.atoms[t]]
        if not with_atoms:
            return False
        t = rng.choice(with_atoms)
        c = rng.choice(self.atoms[t])
        name = self.fresh("v")
        jb = f"Jbeta (X z. X) {t} {c}"
        self.lines.append(f"{name} : {jb} = {jb};")
        self.heavy_used = True
        return True

    def decl_j_binder(self) -> bool:
        if self.heavy_used:
            return False
        rng = self.rng
        usable = [t for t in self.sorts if self.binder_paths[t]]
        if not usable:
            return False
        t = rng.choice(usable)
        g, base = rng.choice(self.binder_paths[t])
        v = self.fresh("y")
        name = self.fresh("w")
        self.lines.append(
            f"{name} : ({v} : {t}) -> "
            f"Id ({base} = {v}) (J (x z. {base} = x) ({g} {base}) ({g} {v})) ({g} {v});"
        )
        self.heavy_used = True
        return True

    # -- forced prerequisites for the planned eliminator samples ---------------

    def _force_point(self, t: str) -> str:
        name = self.fresh("c")
        self.lines.append(f"{name} : {t};")
        self.atoms[t].append(name)
        self.points[t].append(name)
        return name

    def _force_loop(self, t: str, base: str) -> str:
        name = self.fresh("p")
        self.lines.append(f"{name} : {base} = {base};")
        self.paths[t].append((name, base, base))
        return name

    # -- driver ----------------------------------------------------------------

    _MAKERS = (
        ("sort", 7.0),
        ("fam", 6.0),
        ("point", 34.0),
        ("small_path", 20.0),
        ("large_path", 5.0),
        ("compose", 1.0),
        ("j_const", 2.0),
        ("ju", 2.0),
        ("jbeta", 0.2),
        ("jbetau", 1.0),
        ("j_binder", 1.0),
    )

    # Planned samples guarantee one eliminator shape each; the weights keep
    # the expensive computation-witness shape rare.
    _PLANS = (
        ("compose", 0.16),
        ("j_const", 0.20),
        ("ju", 0.20),
        ("jbeta", 0.07),
        ("jbetau", 0.16),
        ("j_binder", 0.21),
    )

    def _run_plan(self) -> None:
        rng = self.rng
        target = rng.choices(
            [p for p, _ in self._PLANS], [w for _, w in self._PLANS]
        )[0]
        t = self.sorts[0]
        c = self._force_point(t)
        if target == "compose":
            self._force_loop(t, c)
            self._force_loop(t, c)
        elif target in ("j_const", "jbeta"):
            self._force_loop(t, c)
        elif target == "ju":
            name = self.fresh("q")
            self.lines.append(f"{name} : {t} = {t};")
            self.large_paths.append((name, t, t))
        elif target == "j_binder":
            name = self.fresh("p")
            v = self.fresh("y")
            self.lines.append(f"{name} : ({v} : {t}) -> {c} = {v};")
            self.binder_paths[t].append((name, c))
        made = getattr(self, f"decl_{target}")()
        assert made, target

    def run(self) -> str:
        rng = self.rng
        self.gen_assume()
        self.decl_sort()
        names = [m for m, _ in self._MAKERS]
        weights = [w for _, w in self._MAKERS]
        n_assume = 1 if self.lines and self.lines[0].startswith("assume") else 0
        if rng.random() < 0.27:
            self._run_plan()
            used = len(self.lines) - n_assume
            extra = rng.randint(0, max(0, MAX_SIG_DECLS - used))
        else:
            extra = rng.randint(0, MAX_SIG_DECLS - 1)
        for _ in range(extra):
            kind = rng.choices(names, weights)[0]
            made = getattr(self, f"decl_{kind}")()
            if not made:
                self.decl_point() or self.decl_sort()
        return "\n".join(self.lines) + "\n"


def gen_signature(rng: random.Random) -> str:
    """One random well-typed surface signature (at most 6 declarations)."""
    return _Gen(rng).run()
