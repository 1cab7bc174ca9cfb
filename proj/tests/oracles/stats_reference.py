"""Reference values for the statistics tests (scipy / statsmodels)."""
import numpy as np
from scipy import special, stats
from statsmodels.stats.proportion import proportion_confint

print("kolmogorov_sf", [repr(float(special.kolmogorov(x))) for x in (0.3, 0.5, 1.0, 1.5, 2.5)])

a = np.array([0.1, -1.3, 2.2, 0.7, -0.4, 1.9, 0.05])
b = np.array([0.3, -0.2, 1.1, 3.0, -2.5])
print("wasserstein1", repr(stats.wasserstein_distance(a, b)))
D = stats.ks_2samp(a, b).statistic
print("ks2 D", repr(D), "exact p", repr(stats.ks_2samp(a, b, method="exact").pvalue))

z = np.linspace(-2.0, 2.0, 41) ** 3 / 4
Dn = stats.kstest(z, "norm").statistic
sn = np.sqrt(len(z))
print("ks_normal D", repr(Dn), "p", repr(float(special.kolmogorov((sn + 0.12 + 0.11 / sn) * Dn))))

for k, n in [(0, 10), (3, 10), (37, 400), (10, 10)]:
    lo, hi = proportion_confint(k, n, alpha=0.05, method="wilson")
    print("wilson", k, n, repr(lo), repr(hi))

x = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
y = np.array([2.1, 3.9, 6.2, 7.8, 10.1])
r = stats.linregress(x, y)
print("fit", repr(r.slope), repr(r.intercept), repr(r.stderr))
