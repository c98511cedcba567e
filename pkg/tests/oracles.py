"""Reference implementations used to cross-check the library.

Nothing here imports the canonical-form code or the tiling engine.
"""

from __future__ import annotations

from collections import defaultdict


def _cyclic_key(face):
    k = len(face)
    forward = [tuple(face[(i + j) % k] for j in range(k)) for i in range(k)]
    back = list(reversed(face))
    backward = [tuple(back[(i + j) % k] for j in range(k)) for i in range(k)]
    return min(forward + backward)


class _Plain:
    """Adjacency data read straight from a face list."""

    def __init__(self, n, faces):
        self.n = n
        self.faces = [list(f) for f in faces]
        self.face_keys = {_cyclic_key(f) for f in self.faces}
        self.adj = defaultdict(set)
        self.around = defaultdict(list)
        for f in self.faces:
            for i, v in enumerate(f):
                self.adj[v].add(f[i - 1])
                self.adj[v].add(f[(i + 1) % len(f)])
                self.around[v].append(f)
        self.profile = [self._profile(v) for v in range(n)]

    def _profile(self, v):
        # cyclic face-size sequence around v, up to rotation and reflection
        faces = self.around[v]
        edge_faces = defaultdict(list)
        for idx, f in enumerate(faces):
            i = f.index(v)
            for w in (f[i - 1], f[(i + 1) % len(f)]):
                edge_faces[w].append(idx)
        order, seen = [], set()
        cur = 0
        while cur not in seen:
            seen.add(cur)
            order.append(len(faces[cur]))
            f = faces[cur]
            i = f.index(v)
            nxt = None
            for w in (f[i - 1], f[(i + 1) % len(f)]):
                for other in edge_faces[w]:
                    if other != cur and other not in seen:
                        nxt = other
                        break
                if nxt is not None:
                    break
            if nxt is None:
                break
            cur = nxt
        return _cyclic_key(order)


def backtrack_isomorphism(n1, faces1, n2, faces2):
    """Search vertex bijections respecting degrees, face-size sequences
    around vertices, adjacency and faces.  Returns a bijection or None."""
    if n1 != n2 or len(faces1) != len(faces2):
        return None
    a, b = _Plain(n1, faces1), _Plain(n2, faces2)
    if sorted(a.profile) != sorted(b.profile):
        return None

    # visit vertices of a in breadth-first order so every vertex after the
    # first has an already-mapped neighbour
    order, seen = [], set()
    for root in range(n1):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        for v in queue:
            order.append(v)
            for w in sorted(a.adj[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    position = {v: i for i, v in enumerate(order)}
    faces_done_at = defaultdict(list)
    for f in a.faces:
        faces_done_at[max(position[v] for v in f)].append(f)

    phi, used = {}, set()

    def candidates(v):
        mapped = [w for w in a.adj[v] if w in phi]
        if not mapped:
            return range(n2)
        pool = set(b.adj[phi[mapped[0]]])
        for w in mapped[1:]:
            pool &= b.adj[phi[w]]
        return sorted(pool)

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for c in candidates(v):
            if c in used or b.profile[c] != a.profile[v]:
                continue
            if len(b.adj[c]) != len(a.adj[v]):
                continue
            phi[v] = c
            used.add(c)
            ok = all(_cyclic_key([phi[x] for x in f]) in b.face_keys for f in faces_done_at[i])
            if ok and extend(i + 1):
                return True
            del phi[v]
            used.discard(c)
        return False

    if not extend(0):
        return None
    return [phi[v] for v in range(n1)]


def grid_triangular(r, s, k):
    """Faces of the triangulated r x s grid whose top row is glued to the
    bottom row reversed with twist k."""

    def u(i, j):
        if i == s:
            return (k - j) % r
        return i * r + j % r

    faces = []
    for i in range(s):
        for j in range(r):
            faces.append([u(i, j), u(i, j + 1), u(i + 1, j)])
            faces.append([u(i, j + 1), u(i + 1, j + 1), u(i + 1, j)])
    return r * s, faces


def grid_square(r, s, k):
    """Square-grid analogue of :func:`grid_triangular`."""

    def u(i, j):
        if i == s:
            return (k - j) % r
        return i * r + j % r

    faces = [[u(i, j), u(i, j + 1), u(i + 1, j + 1), u(i + 1, j)] for i in range(s) for j in range(r)]
    return r * s, faces
