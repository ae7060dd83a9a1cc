"""Fit [_pD]_{(1,1)} * [_pA]_Delta in (v, v' = v^-p) for the three shapes of Delta and compare with closed forms."""

from mirabolic.decorated import DecoratedMatrix, diagonal
from mirabolic.laurent import TwoVarLaurent
from mirabolic.stabilization import stabilize_fit


def tv(terms):
    """{(a, b): c} -> c v^a v'^b."""
    return TwoVarLaurent(terms)


def printed_case_a(A, j1):
    s_le = sum(A[1, j] for j in range(2, j1 + 1))
    out = {A.delta: tv({(s_le - sum(A[1, j] for j in range(j1 + 1, A.n + 1)) + A[1, 1], -1): 1,
                        (s_le - sum(A[1, j] for j in range(j1 + 1, A.n + 1)) + A[1, 1] - 2 * (s_le + A[1, 1]), 1): -1})}
    for jp in range(j1 + 1, A.n + 1):
        if A[1, jp] > 0:
            e = s_le - sum(A[1, j] for j in range(jp + 1, A.n + 1)) + A[1, 1]
            out[tuple(sorted(A.delta + ((1, jp),)))] = tv({(e, -1): 1})
    return out


def printed_case_b(A, j1, j2):
    n = A.n
    s_in = sum(A[1, j] for j in range(2, j1 + 1))
    s_all = s_in + A[1, 1]
    tail = lambda t: sum(A[1, j] for j in range(t + 1, n + 1))
    e0 = s_in - tail(j1) + A[1, 1]
    out = {A.delta: tv({(e0, -1): 1, (e0 - 2 * s_all, 1): -2})}
    rest = tuple(c for c in A.delta if c != (1, j1))
    e1 = s_in - tail(j2) + A[1, 1]
    g = {(e1, -1): 1, (e1 - 2 * A[1, j1], -1): -1}
    out[rest] = tv(g)
    for jp in range(j2 + 1, n + 1):
        if A[1, jp] > 0:
            e = s_in - tail(jp) - A[1, 1] + A[1, 1]
            key = tuple(sorted(rest + ((1, jp),)))
            prev = out.get(key, tv({}))
            out[key] = prev + tv({(e, -1): 1, (e - 2 * s_all, 1): -1})
    return out


def show(title, A, printed):
    D = diagonal(list(A.ro), [(1, 1)])
    fit = stabilize_fit([D, A])
    print(f"{title}: A = {A}, p0 = {fit.p0}")
    labels = {Z.delta: Z for Z in fit.terms}
    for dl in sorted(set(labels) | set(printed)):
        Z = labels.get(dl)
        got = fit.terms[Z] if Z is not None else tv({})
        den = fit.den(Z) if Z is not None else None
        want = printed.get(dl)
        mark = "ok" if want is not None and den is not None and str(den) == "1" and got == want else "DIFFERS"
        if want is None:
            mark = "not printed"
        print(f"  Delta' = {dl}: fitted {got}" + (f" / ({den})" if den is not None and str(den) != "1" else "")
              + f"   printed {want}   {mark}")


def main():
    A = DecoratedMatrix.make([[1, 1, 1], [0, 1, 2], [1, 0, 1]], [(2, 2)])
    show("case (a), i_1 > 1", A, printed_case_a(A, 2))
    A = DecoratedMatrix.make([[0, 1], [1, 0]], [(1, 2), (2, 1)])
    show("case (b), i_1 = 1", A, printed_case_b(A, 2, 1))
    A = DecoratedMatrix.make([[1, 1, 1], [1, 1, 2], [1, 0, 1]], [(1, 2), (2, 1)])
    show("case (b), i_1 = 1", A, printed_case_b(A, 2, 1))
    A = DecoratedMatrix.make([[2, 1, 0], [1, 1, 1], [0, 1, 1]])
    n = A.n
    printed = {((1, t),): tv({(-sum(A[1, j] for j in range(t + 1, n + 1)), 0): 1}) for t in range(1, n + 1)
               if t == 1 or A[1, t] > 0}
    show("case (c), Delta empty", A, printed)


if __name__ == "__main__":
    main()
