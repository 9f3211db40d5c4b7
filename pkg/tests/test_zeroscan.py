import numpy as np
import pytest

from xishift import (
    ConfigError,
    DomainError,
    EvaluationError,
    MaxIterError,
    ZeroBracket,
    big_xi,
    bisect,
    make_config,
    scan,
    scan_fz,
)
from xishift.shifts import fz_line_vec
from xishift.zeroscan import report_csv_bytes, report_json_bytes

from ._oracles import ZETA_ZEROS

HARDY = make_config([1.0], [0.0], 0.0)
EXHIBIT = make_config([1.0, 0.5, 0.25], [0.0, 1.0, 2.0], 0.5 + 0.25j)


class TestScan:
    def test_constant_has_no_brackets(self):
        assert scan(0.0, 10.0, 0.5, lambda t: 1.0) == []

    def test_linear_on_node(self):
        brs = scan(10.0, 20.0, 1.0, lambda t: t - 15.0)
        assert len(brs) == 1 and brs[0].is_on_node and brs[0].t_lo == 15.0

    def test_big_xi_brackets(self):
        brs = scan(10.0, 30.0, 0.05, big_xi)
        assert len(brs) == 3
        for br, ref in zip(brs, ZETA_ZEROS):
            assert br.t_lo <= ref <= br.t_hi

    def test_evaluator_failure_carries_t(self):
        def bad(t):
            if t > 12.0:
                raise DomainError("boom")
            return 1.0

        with pytest.raises(EvaluationError, match="12.5"):
            scan(10.0, 15.0, 2.5, bad)

    def test_nan_rejected(self):
        with pytest.raises(EvaluationError):
            scan(0.0, 1.0, 0.5, lambda t: float("nan"))

    def test_bad_grid(self):
        with pytest.raises(ConfigError):
            scan(0.0, 1.0, -0.1, lambda t: t)
        with pytest.raises(ConfigError):
            scan(1.0, 0.0, 0.1, lambda t: t)


class TestBisect:
    def test_linear(self):
        br = ZeroBracket(-1.0, 2.0, -1.0, 2.0)
        t, r, it = bisect(br, lambda t: t, 1e-10)
        assert abs(t) < 1e-10 and it > 20

    def test_cubic_flat_residual(self):
        br = ZeroBracket(-1.0, 2.0, -1.0, 8.0)
        t, r, it = bisect(br, lambda t: t**3, 1e-10)
        assert abs(t) < 1e-10 and r < 1e-29

    def test_on_node_short_circuit(self):
        br = ZeroBracket(3.0, 3.0, 0.0, 0.0)
        assert bisect(br, lambda t: t, 1e-8) == (3.0, 0.0, 0)

    def test_big_xi_first_zero(self):
        br = scan(14.0, 14.3, 0.05, big_xi)[0]
        t, r, it = bisect(br, big_xi, 1e-8)
        assert abs(t - ZETA_ZEROS[0]) < 2e-8

    def test_max_iterations(self):
        # a pure sign function never evaluates to zero, so the interval can
        # only shrink to adjacent floats, far wider than the absurd tolerance
        br = ZeroBracket(0.0, 1.0, -1.0, 1.0)
        with pytest.raises(MaxIterError):
            bisect(br, lambda t: 1.0 if t > 1.0 / 3.0 else -1.0, 1e-300)

    def test_bad_tol(self):
        with pytest.raises(ConfigError):
            bisect(ZeroBracket(0.0, 1.0, -1.0, 1.0), lambda t: t, 0.0)


class TestScanFz:
    def test_hardy_recovers_zeta_zeros(self):
        rep = scan_fz(HARDY, 10.0, 30.0, 0.05, 1e-8)
        assert [round(h.t, 6) for h in rep.zeros] == [
            round(r, 6) for r in ZETA_ZEROS
        ]
        for h, ref in zip(rep.zeros, ZETA_ZEROS):
            assert abs(h.t - ref) < 1e-6

    def test_worker_count_immaterial(self):
        reps = [scan_fz(HARDY, 10.0, 30.0, 0.05, 1e-8, workers=w) for w in (1, 4, 8)]
        blobs = {report_json_bytes(r) for r in reps}
        assert len(blobs) == 1
        csvs = {report_csv_bytes(r) for r in reps}
        assert len(csvs) == 1

    def test_exhibit_config(self):
        rep = scan_fz(EXHIBIT, 0.0, 40.0, 0.02, 1e-8, workers=4)
        assert len(rep.brackets) >= 5
        # dense re-evaluation at step/10: exactly one sign change per bracket
        for br in rep.brackets:
            if br.is_on_node:
                continue
            ts = np.linspace(br.t_lo, br.t_hi, 11)
            re, _, _ = fz_line_vec(ts, EXHIBIT)
            assert int(np.sum(re[:-1] * re[1:] < 0)) == 1, br

    def test_soundness_of_reported_zeros(self):
        tol = 1e-8
        rep = scan_fz(HARDY, 10.0, 30.0, 0.05, tol)
        for hit in rep.zeros:
            lo = fz_line_vec(np.array([hit.t - 2 * tol]), HARDY)[0][0]
            hi = fz_line_vec(np.array([hit.t + 2 * tol]), HARDY)[0][0]
            assert (lo < 0) != (hi < 0) or max(abs(lo), abs(hi)) < 1e-10

    def test_completeness_at_quarter_step(self):
        # a subinterval reported empty stays empty at step/4
        rep = scan_fz(HARDY, 15.0, 20.0, 0.05, 1e-8)
        assert rep.brackets == ()
        rep4 = scan_fz(HARDY, 15.0, 20.0, 0.0125, 1e-8)
        assert rep4.brackets == ()

    def test_digest_tracks_inputs(self):
        a = scan_fz(HARDY, 10.0, 12.0, 0.5, 1e-6)
        b = scan_fz(HARDY, 10.0, 12.0, 0.5, 1e-7)
        assert a.config_digest != b.config_digest
        c = scan_fz(HARDY, 10.0, 12.0, 0.5, 1e-6)
        assert a.config_digest == c.config_digest

    def test_report_fields(self):
        rep = scan_fz(HARDY, 14.0, 14.3, 0.05, 1e-8)
        assert rep.grid_step == 0.05 and rep.t_range == (14.0, 14.3)
        assert len(rep.zeros) == len(rep.brackets) == 1
        z = rep.zeros[0]
        assert rep.brackets[0].t_lo <= z.t <= rep.brackets[0].t_hi
        assert z.residual == abs(fz_line_vec(np.array([z.t]), HARDY)[0][0])

    def test_invalid_workers(self):
        with pytest.raises(ConfigError):
            scan_fz(HARDY, 0.0, 1.0, 0.5, 1e-8, workers=0)
