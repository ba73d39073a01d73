"""Pure-Python hinge-loss subgradient kernel.

Must stay operation-for-operation identical to ``_kernel.pyx`` so both
backends produce bitwise-equal weights.
"""


def hinge_sgd(X, y, orders, learning_rate, lam):
    """Train one binary linear SVM.

    X: n rows of d floats; y: n labels in {+1.0, -1.0}; orders: one index
    permutation per epoch.  Step size in epoch t (1-based) is
    ``learning_rate / (1 + learning_rate * lam * (t - 1))``.  Returns
    ``(weights, bias)``.
    """
    X = [list(map(float, row)) for row in X]
    y = [float(v) for v in y]
    d = len(X[0]) if X else 0
    w = [0.0] * d
    b = 0.0
    for t, order in enumerate(orders, 1):
        eta = learning_rate / (1.0 + learning_rate * lam * (t - 1))
        scale = 1.0 - eta * lam
        for i in order:
            x = X[i]
            yi = y[i]
            s = 0.0
            for j in range(d):
                s += w[j] * x[j]
            if yi * (s + b) < 1.0:
                step = eta * yi
                for j in range(d):
                    w[j] = scale * w[j] + step * x[j]
                b += step
            else:
                for j in range(d):
                    w[j] = scale * w[j]
    return w, b
