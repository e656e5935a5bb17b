from fksix.height import drift_experiment
from fksix.verify import verify_coupled_params


def test_positive_lambda_drift_small_box():
    cp = verify_coupled_params(10.0)
    res = drift_experiment(cp, radius=8, n_samples=1500, seed=5, burn_in=100, thin=3)
    assert res.count > 200
    assert abs(res.mean - res.tanh_lam) <= 4 * res.stderr


def test_negative_lambda_drift_small_box():
    cp = verify_coupled_params(10.0).negated()
    assert cp.lam < 0
    res = drift_experiment(cp, radius=8, n_samples=1500, seed=5, burn_in=100, thin=3)
    assert res.count > 150
    assert res.tanh_lam < 0
    assert abs(res.mean - res.tanh_lam) <= 4 * res.stderr


def test_zero_lambda_drift_small_box():
    cp = verify_coupled_params(4.0)
    res = drift_experiment(cp, radius=8, n_samples=1500, seed=13, burn_in=100, thin=3)
    assert res.count > 200
    assert abs(res.mean) <= 4 * res.stderr


def test_drift_records_are_cumulative():
    cp = verify_coupled_params(10.0)
    res = drift_experiment(cp, radius=8, n_samples=200, seed=3, burn_in=50, thin=3)
    by_sample = {}
    for sample, n, xi, h in res.records:
        by_sample.setdefault(sample, []).append((n, xi, h))
    for steps in by_sample.values():
        running = 0
        for k, (n, xi, h) in enumerate(steps, start=1):
            running += xi
            assert n == k and h == running


def test_drift_is_deterministic_under_seed():
    cp = verify_coupled_params(10.0)
    a = drift_experiment(cp, radius=6, n_samples=60, seed=9, burn_in=30, thin=2)
    b = drift_experiment(cp, radius=6, n_samples=60, seed=9, burn_in=30, thin=2)
    assert a.records == b.records
