#!/usr/bin/env python3
"""Regenerates the symmetric simplex quadrature tables in core/src/quadrature_tables.inc.

Orbit abscissae/weights are refined by Newton iteration in 50-digit arithmetic
starting from the published (Dunavant / Keast) approximations, against the
exact barycentric moment formula  int_T lambda^a = d! a! / (d + |a|)!  (weights
normalised to the simplex measure).
"""
import itertools
import mpmath as mp

mp.mp.dps = 50


def exact_moment(alpha):
    d = len(alpha) - 1
    num = mp.factorial(d)
    for a in alpha:
        num *= mp.factorial(a)
    return num / mp.factorial(d + sum(alpha))


def orbit(kind, params):
    if kind == "S3":
        return [(mp.mpf(1) / 3,) * 3]
    if kind == "S21":
        a, = params
        b = 1 - 2 * a
        return sorted(set(itertools.permutations((a, a, b))))
    if kind == "S111":
        a, b = params
        c = 1 - a - b
        return sorted(set(itertools.permutations((a, b, c))))
    if kind == "S4":
        return [(mp.mpf(1) / 4,) * 4]
    if kind == "S31":
        a, = params
        return sorted(set(itertools.permutations((a, a, a, 1 - 3 * a))))
    if kind == "S22":
        a, = params
        return sorted(set(itertools.permutations((a, a, mp.mpf(1) / 2 - a, mp.mpf(1) / 2 - a))))
    if kind == "S211":
        a, b = params
        return sorted(set(itertools.permutations((a, a, b, 1 - 2 * a - b))))
    raise ValueError(kind)


NPARAM = {"S3": 0, "S21": 1, "S111": 2, "S4": 0, "S31": 1, "S22": 1, "S211": 2}


def expand(spec, x):
    pts, wts = [], []
    k = 0
    for kind in spec:
        p = x[k:k + NPARAM[kind]]
        k += NPARAM[kind]
        w = x[k]
        k += 1
        o = orbit(kind, p)
        pts += o
        wts += [w] * len(o)
    return pts, wts


def residuals(spec, d, degree, x):
    pts, wts = expand(spec, x)
    res = []
    for total in range(degree + 1):
        for alpha in itertools.product(range(total + 1), repeat=d + 1):
            if sum(alpha) != total:
                continue
            if list(alpha) != sorted(alpha, reverse=True):
                continue  # symmetric rule: one representative per orbit of exponents
            q = mp.mpf(0)
            for p, w in zip(pts, wts):
                t = w
                for pi, ai in zip(p, alpha):
                    t *= pi ** ai
                q += t
            res.append(q - exact_moment(alpha))
    return res


def refine(spec, d, degree, guess):
    x = [mp.mpf(g) for g in guess]
    for _ in range(60):
        r = residuals(spec, d, degree, x)
        n = len(x)
        J = mp.matrix(len(r), n)
        for j in range(n):
            hstep = mp.mpf("1e-25")
            xp = list(x)
            xp[j] += hstep
            rp = residuals(spec, d, degree, xp)
            for i in range(len(r)):
                J[i, j] = (rp[i] - r[i]) / hstep
        # least-squares Newton step
        JT = J.T
        dx = mp.lu_solve(JT * J, JT * mp.matrix(r))
        x = [xi - dxi for xi, dxi in zip(x, dx)]
        if max(abs(v) for v in dx) < mp.mpf("1e-40"):
            break
    r = residuals(spec, d, degree, x)
    assert max(abs(v) for v in r) < mp.mpf("1e-35"), max(abs(v) for v in r)
    return expand(spec, x)


RULES = [
    # (name, d, degree, orbit spec, initial guess)
    ("tri_deg2", 2, 2, ["S21"], ["0.1666666", "0.333333"]),
    ("tri_deg4", 2, 4, ["S21", "S21"],
     ["0.445948490915965", "0.223381589678011", "0.091576213509771", "0.109951743655322"]),
    ("tri_deg5", 2, 5, ["S3", "S21", "S21"],
     ["0.225", "0.470142064105115", "0.132394152788506", "0.101286507323456", "0.125939180544827"]),
    ("tri_deg6", 2, 6, ["S21", "S21", "S111"],
     ["0.249286745170910", "0.116786275726379", "0.063089014491502", "0.050844906370207",
      "0.053145049844817", "0.310352451033784", "0.082851075618374"]),
    ("tet_deg2", 3, 2, ["S31"], ["0.1381966011250105", "0.25"]),
    ("tet_deg5", 3, 5, ["S31", "S31", "S22"],
     ["0.0927352503108912", "0.0734930431163619", "0.3108859192633006", "0.1126879257180159",
      "0.0455037041256496", "0.0425460207770815"]),
    ("tet_deg6", 3, 6, ["S31", "S31", "S31", "S211"],
     ["0.214602871259151684", "0.0399227502581679", "0.0406739585346113397", "0.0100772110553206",
      "0.322337890142275646", "0.0553571815436547", "0.0636610018750175299", "0.269672331458315867",
      "0.0482142857142857143"]),
]


def main():
    out = ["// Generated by tools/scripts/gen_quadrature.py. Do not edit by hand.", ""]
    # Gauss-Legendre on [0,1] in barycentric form.
    for n in (1, 2, 3, 4):
        xs = mp.polyroots(mp.taylor(lambda t: mp.legendre(n, t), 0, n)[::-1], maxsteps=200, extraprec=200)
        xs = sorted(mp.re(x) for x in xs)
        pts, wts = [], []
        for x in xs:
            dp = mp.diff(lambda t: mp.legendre(n, t), x)
            w = 2 / ((1 - x ** 2) * dp ** 2)
            s = (x + 1) / 2
            pts.append((s, 1 - s))
            wts.append(w / 2)
        emit(out, f"line_gauss{n}", 1, 2 * n - 1, pts, wts)
    for name, d, degree, spec, guess in RULES:
        pts, wts = refine(spec, d, degree, guess)
        assert all(w > 0 for w in wts)
        assert all(0 <= c <= 1 for p in pts for c in p)
        emit(out, name, d, degree, pts, wts)
    with open("core/src/quadrature_tables.inc", "w") as f:
        f.write("\n".join(out) + "\n")


def emit(out, name, d, degree, pts, wts):
    out.append(f"// {name}: {len(pts)} points, exact to degree {degree}")
    out.append(f"constexpr double k_{name}[][{d + 2}] = {{")
    for p, w in zip(pts, wts):
        vals = ", ".join(mp.nstr(c, 21) for c in p)
        out.append(f"    {{{vals}, {mp.nstr(w, 21)}}},")
    out.append("};")
    out.append("")


if __name__ == "__main__":
    main()
