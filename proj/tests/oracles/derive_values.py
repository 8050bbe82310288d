"""Independent reference values for the C++ tests.

Everything here is written from the rate formulas directly (numpy/scipy),
without touching the C++ code. Run it to regenerate the constants frozen in
tests/unit/*.cpp.
"""
import numpy as np
from scipy.optimize import minimize_scalar, minimize

LOG2 = np.log(2.0)
G1 = np.array([1.0, 15.0])
G2 = np.array([7.0, 3.0])


def persp(x, tau):
    return tau * np.log2(1.0 + x / tau)


def af_caps(p1, p2, pr, g1, g2, gt1, gt2):
    a = pr / (p1 * g1 + p2 * g2 + 1.0)
    c12 = np.sum(0.5 * np.log2(1 + 2 * p1 * g1 * gt2 * a / (1 + gt2 * a)))
    c21 = np.sum(0.5 * np.log2(1 + 2 * p2 * g2 * gt1 * a / (1 + gt1 * a)))
    return c12, c21


def ma_value(p11, p21, t, rho, P1=1.0, P2=1.0):
    p1 = np.array([p11, P1 - p11])
    p2 = np.array([p21, P2 - p21])
    r1 = np.sum(persp(G1 * p1, t))
    r2 = np.sum(persp(G2 * p2, t)) / rho
    r3 = np.sum(persp(G1 * p1 + G2 * p2, t)) / (rho + 1)
    return min(r1, r2, r3)


def ma_grid(t, rho, n=2000):
    xs = np.linspace(0.0, 1.0, n)
    P11, P21 = np.meshgrid(xs, xs, indexing="ij")
    p1 = np.stack([P11, 1 - P11])
    p2 = np.stack([P21, 1 - P21])
    g1 = G1[:, None, None]
    g2 = G2[:, None, None]
    r1 = persp(g1 * p1, t).sum(0)
    r2 = persp(g2 * p2, t).sum(0) / rho
    r3 = persp(g1 * p1 + g2 * p2, t).sum(0) / (rho + 1)
    v = np.minimum(np.minimum(r1, r2), r3)
    k = np.unravel_index(np.argmax(v), v.shape)
    return v[k], xs[k[0]], xs[k[1]]


def polish(f, x0, bounds):
    best = minimize(lambda x: -f(*x), x0, method="Nelder-Mead",
                    options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000})
    x = np.clip(best.x, [b[0] for b in bounds], [b[1] for b in bounds])
    return f(*x), x


def bc_value(pr1, t, rho, PR=1.0, gt1=G1, gt2=G2):
    pr = np.array([pr1, PR - pr1])
    r4 = np.sum(persp(gt2 * pr, 1 - t))
    r5 = np.sum(persp(gt1 * pr, 1 - t)) / rho
    return min(r4, r5)


def df_value(t, p11, p21, pr1, rho, sum_cap=True):
    if not (0 < t < 1 and 0 <= p11 <= 1 and 0 <= p21 <= 1 and 0 <= pr1 <= 1):
        return -1.0
    p1 = np.array([p11, 1 - p11]); p2 = np.array([p21, 1 - p21]); pr = np.array([pr1, 1 - pr1])
    c12 = min(np.sum(persp(G1 * p1, t)), np.sum(persp(G2 * pr, 1 - t)))
    c21 = min(np.sum(persp(G2 * p2, t)), np.sum(persp(G1 * pr, 1 - t)))
    v = min(c12, c21 / rho)
    if sum_cap:
        v = min(v, np.sum(persp(G1 * p1 + G2 * p2, t)) / (1 + rho))
    return v


def psc_value(t, p11, p21, pr1, rho):
    if not (0 < t < 1 and 0 <= p11 <= 1 and 0 <= p21 <= 1 and 0 <= pr1 <= 1):
        return -1.0
    p1 = np.array([p11, 1 - p11]); p2 = np.array([p21, 1 - p21]); pr = np.array([pr1, 1 - pr1])
    c12 = np.sum(np.minimum(persp(G1 * p1, t), persp(G2 * pr, 1 - t)))
    c21 = np.sum(np.minimum(persp(G2 * p2, t), persp(G1 * pr, 1 - t)))
    cs = np.sum(persp(G1 * p1 + G2 * p2, t))
    return min(c12, c21 / rho, cs / (1 + rho))


def epigraph_max(terms, x0, bounds):
    """max z s.t. z <= term(x) for each term, by SLSQP on (x, z)."""
    n = len(x0)
    cons = [{"type": "ineq", "fun": (lambda y, f=f: f(*y[:n]) - y[n])} for f in terms]
    z0 = min(f(*x0) for f in terms)
    res = minimize(lambda y: -y[n], np.append(x0, z0), method="SLSQP",
                   bounds=list(bounds) + [(None, None)], constraints=cons,
                   options={"ftol": 1e-15, "maxiter": 2000})
    x = np.clip(res.x[:n], [b[0] for b in bounds], [b[1] for b in bounds])
    return min(f(*x) for f in terms), x


def ma_terms(t, rho):
    def r(k):
        def f(p11, p21):
            p1 = np.array([p11, 1 - p11]); p2 = np.array([p21, 1 - p21])
            return [np.sum(persp(G1 * p1, t)), np.sum(persp(G2 * p2, t)) / rho,
                    np.sum(persp(G1 * p1 + G2 * p2, t)) / (rho + 1)][k]
        return f
    return [r(0), r(1), r(2)]


def best_of_starts(f, starts):
    best = (-1.0, None)
    for s in starts:
        v, x = polish(f, s, [(0, 1)] * 4)
        if v > best[0]:
            best = (v, x)
    return best


if __name__ == "__main__":
    np.set_printoptions(precision=15)
    print("af toy equal power:", af_caps(*(np.full(2, 0.5),) * 3, G1, G2, G1, G2))

    v, a, b = ma_grid(0.5, 1.0)
    pv, x = epigraph_max(ma_terms(0.5, 1.0), np.array([a, b]), [(0, 1), (0, 1)])
    print("ma toy t=0.5 rho=1: grid %.12f polished %.12f at %s" % (v, pv, x))

    xs = np.linspace(0, 1, 200001)
    vals = [bc_value(x, 0.5, 1.0) for x in xs]
    k = int(np.argmax(vals))
    r = minimize_scalar(lambda x: -bc_value(x, 0.5, 1.0), bounds=(max(0, xs[k] - 1e-4), min(1, xs[k] + 1e-4)),
                        method="bounded", options={"xatol": 1e-14})
    print("bc toy t=0.5 rho=1: grid %.12f polished %.12f at %.12f" % (vals[k], -r.fun, r.x))

    rng = np.random.default_rng(0)
    starts = [rng.uniform(0.05, 0.95, 4) for _ in range(40)]
    for rho in (0.5, 1.0, 2.0):
        v, x = best_of_starts(lambda *z: df_value(*z, rho), starts)
        print("df toy rho=%g: %.12f at %s" % (rho, v, x))
        v, x = best_of_starts(lambda *z: df_value(*z, rho, sum_cap=False), starts)
        print("cutset toy rho=%g: %.12f at %s" % (rho, v, x))
        v, x = best_of_starts(lambda *z: psc_value(*z, rho), starts)
        print("psc toy rho=%g: %.12f at %s" % (rho, v, x))
