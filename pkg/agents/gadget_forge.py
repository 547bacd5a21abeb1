import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from agents.ks_logic import criticality_report, find_complete_bases, verify_tifs, verify_tits
from agents.ortho_graph import has_odd_hole_or_antihole, orthogonality_graph
from interfaces.gadget import BasisCover, ExtensionResult, GadgetProvenance, TIFSGadget
from interfaces.projector_set import ProjectorSet
from interfaces.quantum import Ket
from tools.linalg import haar_unitary, is_real, orthogonal_complement
from utils.errors import (
    BudgetExceeded,
    ConstructionFailed,
    EndpointsParallelOrOrthogonal,
    NotSDC,
    OutOfRange,
    TooLarge,
    Uncoverable,
    UnsupportedGeometry,
)
from utils.retry import after_func, attempt_seed

BUG_EDGES = {(0, 1), (0, 7), (1, 2), (1, 3), (2, 3), (5, 6), (5, 7), (6, 7), (2, 6), (3, 4), (4, 5)}
BUG_INTERIOR = 6
PARALLEL_TOL = 1e-9
DISJOINT_TOL = 1e-6
GENERIC_MARGIN = 1e-5
MAX_STEP = math.radians(24)
TARGET_COS = 0.2
MAX_COVER_N = 32
MAX_COVER_D = 6


def _vector(x) -> np.ndarray:
    if isinstance(x, Ket):
        x = x.array
    v = np.asarray(x, dtype=complex).ravel()
    return v / np.linalg.norm(v)


def _real_form(v: np.ndarray) -> np.ndarray:
    """v with its global phase removed, as a real vector."""
    k = int(np.argmax(np.abs(v)))
    rotated = v * np.conj(v[k]) / abs(v[k])
    if np.abs(rotated.imag).max() > 1e-9:
        raise UnsupportedGeometry("gadget construction needs endpoints that are real up to a global phase")
    return rotated.real


def _overlap(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)))


class _VectorPool:
    """Ordered vectors with parallel duplicates merged onto their first occurrence."""

    def __init__(self):
        self.vectors: List[np.ndarray] = []
        self.labels: List[str] = []

    def add(self, v: np.ndarray, label: str) -> int:
        v = np.asarray(v, dtype=complex)
        for k, u in enumerate(self.vectors):
            if _overlap(u, v) >= 1 - PARALLEL_TOL:
                return k
        self.vectors.append(v)
        self.labels.append(label)
        return len(self.vectors) - 1

    def conflicts(self, v: np.ndarray, tol: float = DISJOINT_TOL) -> bool:
        return any(_overlap(u, v) >= 1 - tol for u in self.vectors)

    def to_set(self) -> ProjectorSet:
        return ProjectorSet.from_arrays(self.vectors, labels=self.labels)


class GadgetForger:
    def __init__(
        self,
        seed: int = 2021,
        max_links: int = 9,
        retry_budget: int = 5,
        phi_samples: int = 720,
        pattern: Optional[List[Tuple[int, int]]] = None,
        ortho_tol: float = 1e-9,
        basis_tol: float = 1e-8,
        jobs: int = 1,
    ):
        self.seed = seed
        self.max_links = max_links
        self.retry_budget = retry_budget
        self.phi_samples = phi_samples
        self.pattern = [tuple(p) for p in pattern] if pattern else None
        self.ortho_tol = ortho_tol
        self.basis_tol = basis_tol
        self.jobs = jobs

    def _retrying(self, *errors) -> Retrying:
        return Retrying(
            stop=stop_after_attempt(self.retry_budget),
            retry=retry_if_exception_type(errors),
            after=after_func,
            reraise=True,
        )

    # bug gadget

    def _bug_vectors(self, a: np.ndarray, b: np.ndarray, seed: int) -> Tuple[List[np.ndarray], float]:
        """
        Real solutions of the bug's constraints with A at node 0 and B at node 4.

        In the frame e3 = A, B = s e1 + c e3, nodes 1 and 7 lie in the e1-e2 plane at angles phi and psi.
        Nodes 2 and 6 are orthogonal iff sin(2 psi - phi) = -2 c^2 / (s^2 sin phi) - sin phi.
        """
        c = float(a @ b)
        if c < 0:
            b, c = -b, -c
        s = math.sqrt(max(1 - c * c, 0.0))
        e3 = a
        e1 = b - c * a
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(e3, e1)
        frame = np.stack([e1, e2, e3], axis=1)
        b_frame = np.array([s, 0.0, c])

        rng = np.random.default_rng(seed)
        phis = (np.arange(self.phi_samples) + rng.random()) * (2 * math.pi / self.phi_samples)
        for phi in rng.permutation(phis):
            sin_phi = math.sin(phi)
            if abs(sin_phi) < 1e-3:
                continue
            t = -2 * c * c / (s * s * sin_phi) - sin_phi
            if abs(t) > 1:
                continue
            for branch in (math.asin(t), math.pi - math.asin(t)):
                psi = (phi + branch) / 2
                n1 = np.array([math.cos(phi), math.sin(phi), 0.0])
                n7 = np.array([math.cos(psi), math.sin(psi), 0.0])
                n3 = np.cross(n1, b_frame)
                n3 /= np.linalg.norm(n3)
                n2 = np.cross(n1, n3)
                n5 = np.cross(n7, b_frame)
                n5 /= np.linalg.norm(n5)
                n6 = np.cross(n7, n5)
                nodes = [np.array([0.0, 0.0, 1.0]), n1, n2, n3, b_frame, n5, n6, n7]
                if self._is_generic_bug(nodes):
                    return [frame @ v for v in nodes], c
        raise OutOfRange(c)

    @staticmethod
    def _is_generic_bug(nodes: Sequence[np.ndarray]) -> bool:
        gram = np.abs(np.array([[u @ v for v in nodes] for u in nodes]))
        for i in range(8):
            for j in range(i + 1, 8):
                if (i, j) in BUG_EDGES:
                    if gram[i, j] > 1e-11:
                        return False
                elif gram[i, j] < GENERIC_MARGIN or gram[i, j] > 1 - GENERIC_MARGIN:
                    return False
        return True

    def build_bug_tifs(self, A, B, seed: Optional[int] = None, prefix: str = "g") -> TIFSGadget:
        a_vec, b_vec = _vector(A), _vector(B)
        if len(a_vec) != 3 or len(b_vec) != 3:
            raise UnsupportedGeometry("bug gadgets are built in dimension 3")
        overlap = _overlap(a_vec, b_vec)
        if overlap <= self.ortho_tol or overlap >= 1 - PARALLEL_TOL:
            raise EndpointsParallelOrOrthogonal(overlap)

        nodes, _ = self._bug_vectors(_real_form(a_vec), _real_form(b_vec), self.seed if seed is None else seed)
        vectors = [a_vec] + [n.astype(complex) for n in nodes[1:4]] + [b_vec] + [n.astype(complex) for n in nodes[5:]]
        labels = ["A"] + [f"{prefix}{k}" for k in (1, 2, 3)] + ["B"] + [f"{prefix}{k}" for k in (5, 6, 7)]
        gadget = TIFSGadget(
            vectors=ProjectorSet.from_arrays(vectors, labels=labels),
            endpoint_a=0,
            endpoint_b=4,
            interior=[1, 2, 3, 5, 6, 7],
            links=1,
            overlap=overlap,
            kind="bug",
        )
        inst = find_complete_bases(gadget.vectors, tol=self.basis_tol, ortho_tol=self.ortho_tol)
        if set(inst.graph.edges) != BUG_EDGES or not verify_tifs(inst, 0, 4):
            raise OutOfRange(overlap)
        logging.debug(f"Bug gadget for overlap {overlap:.6f}")
        return gadget

    # chains

    def _tits_vectors(self, p: np.ndarray, q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """D, E completing q to a basis, each at overlap sin(angle(p, q)) / sqrt(2) with p."""
        u = p - (q @ p) * q
        u /= np.linalg.norm(u)
        t = np.cross(q, u)
        return (u + t) / math.sqrt(2), (u - t) / math.sqrt(2)

    def build_tits(self, A, C, seed: Optional[int] = None) -> TIFSGadget:
        """A = 1 forces C = 1: two bugs from A kill the other two members of a basis through C."""
        a_vec, c_vec = _vector(A), _vector(C)
        overlap = _overlap(a_vec, c_vec)
        if overlap <= self.ortho_tol or overlap >= 1 - PARALLEL_TOL:
            raise EndpointsParallelOrOrthogonal(overlap)
        a, q = _real_form(a_vec), _real_form(c_vec)
        if a @ q < 0:
            q = -q
        seed = self.seed if seed is None else seed
        pool = _VectorPool()
        pool.add(a_vec, "A")
        c_index = pool.add(c_vec, "C")
        d_vec, e_vec = self._tits_vectors(a, q)
        pool.add(d_vec, "D")
        pool.add(e_vec, "E")
        for k, target in enumerate((d_vec, e_vec)):
            nodes, _ = self._bug_vectors(a, target, seed + k)
            for m, v in enumerate(nodes):
                if m not in (0, 4):
                    pool.add(v, f"t{k}.{m}")
        vectors = pool.to_set()
        inst = find_complete_bases(vectors, tol=self.basis_tol, ortho_tol=self.ortho_tol)
        if not verify_tits(inst, 0, c_index):
            raise ConstructionFailed("assembled TITS does not force its endpoint")
        return TIFSGadget(
            vectors=vectors,
            endpoint_a=0,
            endpoint_b=c_index,
            interior=[k for k in range(vectors.n) if k not in (0, c_index)],
            links=2,
            overlap=overlap,
            kind="tits",
        )

    def chain_tifs(self, A, B, max_links: Optional[int] = None, seed: Optional[int] = None, prefix: str = "g") -> TIFSGadget:
        """
        TIFS between any two non-orthogonal endpoints in d = 3.

        A single bug when the overlap allows it. Otherwise A is carried by TITS links along the
        great circle through A and B, away from B, to a point P with a small overlap with B,
        and a last bug joins P to B.
        """
        max_links = self.max_links if max_links is None else max_links
        seed = self.seed if seed is None else seed
        a_vec, b_vec = _vector(A), _vector(B)
        overlap = _overlap(a_vec, b_vec)
        if overlap <= self.ortho_tol or overlap >= 1 - PARALLEL_TOL:
            raise EndpointsParallelOrOrthogonal(overlap)

        if max_links >= 1:
            try:
                return self.build_bug_tifs(a_vec, b_vec, seed=seed, prefix=prefix)
            except OutOfRange:
                logging.debug(f"No single bug for overlap {overlap:.6f}; chaining")

        a, b = _real_form(a_vec), _real_form(b_vec)
        if a @ b < 0:
            b = -b
        theta0 = math.acos(min(overlap, 1.0))
        target = math.acos(TARGET_COS)
        if theta0 > target - 1e-3:
            target = (theta0 + math.pi / 2) / 2
        sweep = target - theta0
        u = b - (a @ b) * a
        u /= np.linalg.norm(u)

        steps = max(1, math.ceil(sweep / MAX_STEP))
        while 2 * steps + 1 <= max_links:
            try:
                return self._assemble_chain(a_vec, b_vec, a, b, u, sweep, steps, seed, prefix, overlap)
            except OutOfRange:
                logging.debug(f"Chain with {steps} steps failed; refining")
                steps *= 2
        raise BudgetExceeded(max_links, overlap)

    def _assemble_chain(self, a_vec, b_vec, a, b, u, sweep, steps, seed, prefix, overlap) -> TIFSGadget:
        path = [math.cos(j * sweep / steps) * a - math.sin(j * sweep / steps) * u for j in range(steps + 1)]
        pool = _VectorPool()
        pool.add(a_vec, "A")
        pool.add(b_vec, "B")
        link = 0

        def add_bug(p, q):
            nonlocal link
            nodes, _ = self._bug_vectors(p, q, seed + link)
            for m, v in enumerate(nodes):
                pool.add(v, f"{prefix}{link}.{m}")
            link += 1

        for j in range(1, steps + 1):
            d_vec, e_vec = self._tits_vectors(path[j - 1], path[j])
            pool.add(path[j], f"{prefix}P{j}")
            add_bug(path[j - 1], d_vec)
            add_bug(path[j - 1], e_vec)
        add_bug(path[-1], b)

        vectors = pool.to_set()
        inst = find_complete_bases(vectors, tol=self.basis_tol, ortho_tol=self.ortho_tol)
        if not verify_tifs(inst, 0, 1):
            raise ConstructionFailed("assembled chain does not exclude its endpoints")
        logging.debug(f"Chain of {link} bugs, {vectors.n} vectors, for overlap {overlap:.6f}")
        return TIFSGadget(
            vectors=vectors,
            endpoint_a=0,
            endpoint_b=1,
            interior=list(range(2, vectors.n)),
            links=link,
            overlap=overlap,
            kind="chain",
        )

    # covers and extensions

    def minimal_basis_cover(self, S: ProjectorSet, seed: Optional[int] = None) -> BasisCover:
        """Fewest disjoint complete bases covering S, by exact search over orthogonal groups."""
        n, d = S.n, S.dim
        if n > MAX_COVER_N:
            raise TooLarge("basis cover", n, MAX_COVER_N)
        if d > MAX_COVER_D:
            raise TooLarge("basis cover dimension", d, MAX_COVER_D)
        gram = np.abs(S.array.conj() @ S.array.T)
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i, j] >= 1 - PARALLEL_TOL:
                    raise Uncoverable(f"{S.labels[i]} and {S.labels[j]} are parallel")
        G = orthogonality_graph(S, tol=self.ortho_tol)

        def partitions(v: int, groups: List[List[int]], limit: int):
            """Partitions of vertices v.. into orthogonal groups of size <= d, at most limit groups."""
            if len(groups) > limit:
                return
            if v == n:
                yield [list(g) for g in groups]
                return
            for g in groups:
                if len(g) < d and all(G.has_edge(v, u) for u in g):
                    g.append(v)
                    yield from partitions(v + 1, groups, limit)
                    g.pop()
            groups.append([v])
            yield from partitions(v + 1, groups, limit)
            groups.pop()

        size = -(-n // d)
        while next(partitions(0, [], size), None) is None:
            size += 1

        rng = np.random.default_rng(self.seed if seed is None else seed)
        real = is_real(S)
        for candidate in partitions(0, [], size):
            cover = self._complete_groups(S, candidate, rng, real)
            if cover is not None:
                logging.info(f"Minimal basis cover: {cover.size} bases, {len(cover.completions)} completion vectors")
                return cover
        raise Uncoverable(f"every {size}-basis cover has colliding completion vectors")

    @staticmethod
    def _complete_groups(S: ProjectorSet, groups: List[List[int]], rng, real: bool) -> Optional[BasisCover]:
        pool = _VectorPool()
        for k in range(S.n):
            pool.vectors.append(S.array[k])
            pool.labels.append(S.labels[k])
        bases, completions = [], []
        for group in groups:
            complement = orthogonal_complement(S.array[group])
            extra = complement.shape[1]
            # a single missing vector is fixed up to phase, so resampling cannot help
            for _ in range(50 if extra > 1 else 1):
                rotated = complement @ haar_unitary(extra, rng, real=real) if extra else complement
                columns = [rotated[:, m] for m in range(extra)]
                if not any(pool.conflicts(c) for c in columns):
                    break
            else:
                return None
            basis = list(group)
            for column in columns:
                pool.vectors.append(column)
                pool.labels.append(f"c{len(completions) + 1}")
                completions.append(len(pool.vectors) - 1)
                basis.append(len(pool.vectors) - 1)
            bases.append(sorted(basis))
        return BasisCover(vectors=pool.to_set(), bases=bases, original=list(range(S.n)), completions=completions)

    def construct_ks_from_bases(
        self,
        S: ProjectorSet,
        bases: List[List[int]],
        pattern: Optional[List[Tuple[int, int]]] = None,
        seed: Optional[int] = None,
        max_vectors: Optional[int] = None,
    ) -> ExtensionResult:
        """
        Critical KS set from disjoint bases B0, .., BN of S: a TIFS from element i of B0 to every
        element of each basis the pattern assigns to i. The default pattern, for N = d + 1 bases,
        sends element i to basis i + 1.

        With max_vectors set, TooLarge is raised before any gadget is built when the output
        is bound to exceed it.
        """
        d = S.dim
        if len(bases) < d + 1:
            raise ConstructionFailed(f"{len(bases)} bases given, at least {d + 1} are needed")
        pattern = pattern or self.pattern
        if pattern is None:
            if len(bases) != d + 1:
                raise ConstructionFailed(f"{len(bases)} bases need an explicit TIFS pattern; only {d + 1} have a default")
            pattern = [(i, i + 1) for i in range(d)]
        for i, k in pattern:
            if not (0 <= i < d and 1 <= k < len(bases)):
                raise ConstructionFailed(f"pattern entry ({i}, {k}) is outside the bases")
        if max_vectors is not None:
            planned = self.planned_size(S, bases, pattern)
            if planned > max_vectors:
                raise TooLarge("critical KS construction", planned, max_vectors)

        base_seed = self.seed if seed is None else seed
        attempts = 0
        for attempt in self._retrying(ConstructionFailed, OutOfRange):
            with attempt:
                attempts = attempt.retry_state.attempt_number
                result = self._assemble_ks(S, bases, pattern, attempt_seed(base_seed, attempts))
        result.attempts = attempts
        return result

    def planned_size(self, S: ProjectorSet, bases: List[List[int]], pattern: List[Tuple[int, int]]) -> int:
        """Lower bound on the assembled set: S plus one bug interior per non-orthogonal dashed edge."""
        edges = sum(
            1
            for i, k in pattern
            for target in bases[k]
            if _overlap(S.array[bases[0][i]], S.array[target]) > self.ortho_tol
        )
        return S.n + BUG_INTERIOR * edges

    def _assemble_ks(self, S: ProjectorSet, bases, pattern, seed: int) -> ExtensionResult:
        pool = _VectorPool()
        for k in range(S.n):
            pool.vectors.append(S.array[k])
            pool.labels.append(S.labels[k])
        gadgets: List[GadgetProvenance] = []
        b0 = bases[0]
        counter = 0
        for i, k in pattern:
            source = b0[i]
            for target in bases[k]:
                a_vec, b_vec = S.array[source], S.array[target]
                label_a, label_b = S.labels[source], S.labels[target]
                if _overlap(a_vec, b_vec) <= self.ortho_tol:
                    gadgets.append(GadgetProvenance(source=label_a, target=label_b, kind="orthogonal"))
                    continue
                gadget = self.chain_tifs(a_vec, b_vec, seed=seed + 101 * counter, prefix=f"{label_a}>{label_b}.")
                counter += 1
                added = []
                for m in gadget.interior:
                    before = len(pool.vectors)
                    index = pool.add(gadget.vectors.array[m], gadget.vectors.labels[m])
                    if index == before:
                        added.append(pool.labels[index])
                gadgets.append(
                    GadgetProvenance(
                        source=label_a,
                        target=label_b,
                        kind="bug" if gadget.kind == "bug" else "chain",
                        links=gadget.links,
                        labels=added,
                    )
                )

        vectors = pool.to_set()
        inst = find_complete_bases(vectors, tol=self.basis_tol, ortho_tol=self.ortho_tol)
        report = criticality_report(inst, jobs=self.jobs)
        if not report.is_ks_set:
            raise ConstructionFailed("assembled set still admits a KS assignment")
        if not report.is_critical:
            labels = [vectors.labels[v] for v in report.blocking_vertices[:5]]
            raise ConstructionFailed(f"assembled KS set is not critical; removable: {labels}")
        logging.info(f"✅ Critical KS set with {vectors.n} vectors and {len(inst.bases)} bases")
        return ExtensionResult(
            vectors=vectors,
            original=list(range(S.n)),
            method="construction",
            bases=[list(b) for b in bases],
            pattern=[tuple(p) for p in pattern],
            gadgets=gadgets,
            seed=seed,
        )

    def extend_to_critical_ks(
        self,
        S: ProjectorSet,
        seed: Optional[int] = None,
        max_vectors: Optional[int] = None,
    ) -> ExtensionResult:
        G = orthogonality_graph(S, tol=self.ortho_tol)
        if not has_odd_hole_or_antihole(G):
            raise NotSDC("the orthogonality graph has no odd hole and no odd antihole")
        seed = self.seed if seed is None else seed
        cover = self.minimal_basis_cover(S, seed=seed)
        d = S.dim
        vectors = cover.vectors
        bases = [list(b) for b in cover.bases]

        rng = np.random.default_rng(seed)
        real = is_real(S)
        padding = []
        while len(bases) + len(padding) < d + 1:
            for _ in range(50):
                q = haar_unitary(d, rng, real=real)
                columns = [q[:, m] for m in range(d)]
                clash = any(
                    _overlap(u, c) >= 1 - DISJOINT_TOL or 1e-9 < _overlap(u, c) < 1e-6
                    for u in vectors.array
                    for c in columns
                )
                if not clash:
                    break
            else:
                raise ConstructionFailed("could not sample a padding basis disjoint from the input")
            start = vectors.n
            vectors = vectors.extended(columns, [f"r{len(padding) + 1}.{m + 1}" for m in range(d)])
            padding.append(list(range(start, start + d)))
        # a padding basis, when present, plays B0 so every input basis is a TIFS target
        ordered = padding[:1] + bases + padding[1:]
        logging.info(f"Extending {S.n} vectors: {len(bases)} cover bases, {len(padding)} padding bases")
        result = self.construct_ks_from_bases(vectors, ordered, seed=seed, max_vectors=max_vectors)
        result.original = list(range(S.n))
        return result

    # catalog matching

    @staticmethod
    def match_into(S: ProjectorSet, T: ProjectorSet, tol: float = 1e-8) -> Optional[Tuple[List[int], np.ndarray]]:
        """
        Find an injection sigma and a unitary U with U T[sigma(k)] equal to S[k] up to a phase,
        by backtracking on Gram moduli and fixing phases along a spanning forest.
        """
        if S.dim != T.dim or S.n > T.n:
            return None
        gs = S.array.conj() @ S.array.T
        gt = T.array.conj() @ T.array.T
        ms, mt = np.abs(gs), np.abs(gt)
        n = S.n
        sigma: List[int] = []

        def consistent() -> Optional[np.ndarray]:
            phases = np.zeros(n, dtype=complex)
            for root in range(n):
                if phases[root] != 0:
                    continue
                phases[root] = 1
                stack = [root]
                while stack:
                    k = stack.pop()
                    for m in range(n):
                        if phases[m] == 0 and ms[k, m] > tol:
                            phases[m] = gs[k, m] / (np.conj(phases[k]) * gt[sigma[k], sigma[m]])
                            stack.append(m)
            expected = np.conj(phases)[:, None] * phases[None, :] * gt[np.ix_(sigma, sigma)]
            if np.abs(expected - gs).max() > tol:
                return None
            x = T.array[sigma].T
            y = (S.array / phases[:, None]).T
            w, _, vh = np.linalg.svd(y @ x.conj().T)
            u = w @ vh
            if np.abs(u @ x - y).max() > tol:
                return None
            return u

        def search(k: int) -> Optional[np.ndarray]:
            if k == n:
                return consistent()
            order = ([k] if k < T.n else []) + [j for j in range(T.n) if j != k]
            for j in order:
                if j in sigma:
                    continue
                if all(abs(ms[k, m] - mt[j, sigma[m]]) <= tol for m in range(k)):
                    sigma.append(j)
                    found = search(k + 1)
                    if found is not None:
                        return found
                    sigma.pop()
            return None

        u = search(0)
        return None if u is None else (list(sigma), u)

    def extend_to_critical_sic(self, S: ProjectorSet, certifier=None, catalog: Optional[Dict[str, ProjectorSet]] = None) -> ExtensionResult:
        from agents.sic_cert import SICCertifier
        from tools.dataset_catalog import critical_sic_catalog

        catalog = critical_sic_catalog() if catalog is None else catalog
        for name, T in catalog.items():
            match = self.match_into(S, T)
            if match is None:
                continue
            sigma, u = match
            used = set(S.labels)
            rest = [j for j in range(T.n) if j not in set(sigma)]
            labels = [T.labels[j] if T.labels[j] not in used else f"{name}.{T.labels[j]}" for j in rest]
            vectors = S.extended([u @ T.array[j] for j in rest], labels)
            method = "identity" if not rest else "catalog"
            logging.info(f"🚀 {S.n} vectors embed in catalog set {name}; {len(rest)} vectors added")
            return ExtensionResult(
                vectors=vectors,
                original=list(range(S.n)),
                method=method,
                catalog_name=name,
                sic_critical=True,
            )

        certifier = certifier or SICCertifier(jobs=self.jobs)
        try:
            if certifier.is_critical_sic(S).critical:
                return ExtensionResult(vectors=S, original=list(range(S.n)), method="identity", sic_critical=True)

            base_seed = self.seed
            attempts = 0
            result = None
            for attempt in self._retrying(ConstructionFailed):
                with attempt:
                    attempts = attempt.retry_state.attempt_number
                    result = self.extend_to_critical_ks(
                        S,
                        seed=attempt_seed(base_seed, attempts),
                        max_vectors=certifier.max_n,
                    )
                    criticality = certifier.is_critical_sic(result.vectors)
                    if not criticality.critical:
                        raise ConstructionFailed(f"extension is not critical SI-C ({criticality.verdict})")
        except TooLarge as e:
            raise ConstructionFailed(f"critical SI-C cannot be certified for this input: {e}") from e
        result.sic_critical = True
        result.attempts = attempts
        return result
