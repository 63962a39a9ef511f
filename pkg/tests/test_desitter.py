"""Expanding-background field tests: frozen extended-precision anchors
(tools/gen_oracle_values.py), bound-state profiles, cross-method agreement,
and the late-time decay machinery."""

import math

import numpy as np
import pytest

from dswave import (
    ALPHA_FS,
    DegenerateFit,
    DomainError,
    InvalidParam,
    ModeState,
    PhysicalParams,
    RadialProfile,
    decay_classify,
    decay_fit,
    evaluate_grid,
    field_hankel,
    field_hankel_huygens,
    field_riemann,
    field_riemann_huygens,
    gaussian_profile,
    integrate_finite,
    ita_remainder,
    pionic_mode,
    pionic_profile,
    scaled_profile,
    spherical_harmonic,
)
from dswave.desitter import FieldGrid

SQRT2 = math.sqrt(2.0)

MU_MINUS_HALF_Z1 = -5.32821825895e-5
MU_MINUS_HALF_Z2 = -0.000213162812779
PIONIC_F0_312_08 = 1.71597032758528369  # n=3, ell=1, Z=2, C=1, r=0.8
PIONIC_L2_NORM_21 = 4.89884844741294377  # ||r F0||_2 for n=2, ell=1, Z=1
PIONIC_HAT_21 = {
    0.7: 4.61258856966495286,
    2.3: 0.0654755776367436552,
}

# bare kernel convolution int_0^{phi(t)} (2 K0 + 3 H K1) v0 ds at r=0.7 for
# the gaussian ell=1 block, H=1, m=2; ita_remainder carries an extra
# e^{-3 H t / 2} damping
ITA_CONV_M2 = {
    1.2: complex(-0.0932050855140683421, 0.0),
    20.0: complex(5824.85909526063097, 0.0),
}

# collapsing-mass pionic ground state at r = 1/H (H=1): lead plus plain time
# integral in closed form
HUYGENS_PIONIC_R1H = {
    0.5: 0.137745688497679748,
    1.5: 0.0566629983476057628,
}


class TestPionicProfiles:
    def test_small_r_exponent_constants(self):
        assert pionic_profile(1, 0, 1).mu - 0.5 == pytest.approx(
            MU_MINUS_HALF_Z1, rel=1e-9
        )
        assert pionic_profile(1, 0, 2).mu - 0.5 == pytest.approx(
            MU_MINUS_HALF_Z2, rel=1e-9
        )

    def test_fine_structure_constant(self):
        assert ALPHA_FS == 1.0 / 137.0

    def test_profile_value(self):
        assert pionic_profile(3, 1, 2).func(0.8) == pytest.approx(
            PIONIC_F0_312_08, rel=1e-12
        )

    def test_l2_normalization(self):
        prof = pionic_profile(2, 1, 1, normalization="l2")
        raw = pionic_profile(2, 1, 1)
        assert prof(1.3) == pytest.approx(raw(1.3) / PIONIC_L2_NORM_21, rel=1e-10)
        norm2 = integrate_finite(
            lambda r: abs(prof(r)) ** 2 * r * r, 1e-9, 60.0
        ).value
        assert norm2.real == pytest.approx(1.0, rel=1e-7)

    def test_closed_form_transform(self):
        prof = pionic_profile(2, 1, 1)
        for lam, want in PIONIC_HAT_21.items():
            assert prof.hankel(lam) == pytest.approx(want, rel=1e-12)

    def test_validation(self):
        with pytest.raises(InvalidParam):
            pionic_profile(1, 1, 1)  # needs ell < n
        with pytest.raises(InvalidParam):
            pionic_profile(0, 0, 1)
        with pytest.raises(InvalidParam):
            pionic_profile(1, 0, 0)
        with pytest.raises(DomainError):
            pionic_profile(1, 0, 1, alpha=0.9)  # Z alpha beyond the exponent

    def test_pionic_mode_velocity(self):
        mode = pionic_mode(2, 1, energy=0.7)
        assert mode.f1 is not None
        assert mode.f1(0.9) == pytest.approx(-0.7j * mode.f0(0.9), rel=1e-14)
        assert pionic_mode(2, 1).f1 is None


class TestAssemblyAnchors:
    @pytest.mark.parametrize("t,conv", sorted(ITA_CONV_M2.items()))
    def test_kernel_convolution_remainder(self, t, conv):
        mode = ModeState(ell=1, m=0, f0=gaussian_profile(1))
        params = PhysicalParams(H=1.0, m=2.0)
        want = conv * math.exp(-1.5 * t)
        got = ita_remainder(mode, params, 0.7, t)
        assert got == pytest.approx(want, rel=1e-6)

    @pytest.mark.parametrize("t,want", sorted(HUYGENS_PIONIC_R1H.items()))
    def test_collapsing_mass_pionic_closed_form(self, t, want):
        mode = pionic_mode(1, 0)
        params = PhysicalParams(H=1.0, m=SQRT2)
        got = field_riemann_huygens(mode, params, 1.0, t)
        assert got == pytest.approx(want, rel=1e-9)

    def test_remainder_requires_valid_domain(self):
        mode = ModeState(ell=0, m=0, f0=gaussian_profile(0))
        params = PhysicalParams(H=1.0, m=1.0)
        with pytest.raises(DomainError):
            ita_remainder(mode, params, -0.5, 1.0)
        with pytest.raises(DomainError):
            ita_remainder(mode, params, 0.5, -1.0)

    def test_weak_small_r_exponent_rejected(self):
        # r^{mu-1/2} data with mu <= ell - 3/2 cannot feed an ell block
        bad = RadialProfile(func=lambda x: x**-0.3, mu=0.2, parity_ell=2)
        mode = ModeState(ell=2, m=0, f0=bad)
        with pytest.raises(InvalidParam):
            field_riemann(mode, PhysicalParams(H=1.0, m=1.0), 0.5, 0.5)


class TestFieldMethods:
    def test_initial_data_recovery_all_methods(self):
        mode = ModeState(ell=1, m=1, f0=gaussian_profile(1))
        params = PhysicalParams(H=1.0, m=SQRT2)
        theta, phi = 0.9, 0.4
        y = spherical_harmonic(1, 1, theta, phi)
        want = y * gaussian_profile(1)(0.8)
        for fn in (field_riemann, field_hankel, field_riemann_huygens, field_hankel_huygens):
            got = fn(mode, params, 0.8, 0.0, theta, phi)
            assert got == pytest.approx(want, rel=1e-9), fn.__name__

    def test_riemann_vs_hankel(self):
        mode = ModeState(ell=2, m=0, f0=gaussian_profile(2))
        params = PhysicalParams(H=1.0, m=1.0)
        for r, t in [(0.6, 0.5), (1.1, 1.5)]:
            a = field_riemann(mode, params, r, t)
            b = field_hankel(mode, params, r, t)
            assert abs(a - b) <= 1e-7 * (1.0 + abs(a))

    def test_huygens_methods_agree_with_general_ones(self):
        mode = pionic_mode(2, 1, energy=SQRT2)
        params = PhysicalParams(H=1.0, m=SQRT2)
        for r, t in [(0.7, 0.6), (1.3, 2.1)]:
            vals = [
                field_riemann(mode, params, r, t),
                field_hankel(mode, params, r, t),
                field_riemann_huygens(mode, params, r, t),
                field_hankel_huygens(mode, params, r, t),
            ]
            spread = max(abs(v - vals[0]) for v in vals)
            assert spread <= 1e-7 * (1.0 + abs(vals[0]))

    def test_huygens_methods_reject_other_masses(self):
        mode = ModeState(ell=0, m=0, f0=gaussian_profile(0))
        params = PhysicalParams(H=1.0, m=1.0)
        with pytest.raises(InvalidParam):
            field_riemann_huygens(mode, params, 0.5, 0.5)

    def test_heavy_mass_field_is_real(self):
        mode = ModeState(ell=1, m=0, f0=gaussian_profile(1))
        params = PhysicalParams(H=1.0, m=2.0)
        for r, t in [(0.4, 0.8), (1.5, 1.7)]:
            v = field_riemann(mode, params, r, t)
            assert abs(v.imag) <= 1e-10 * abs(v)


class TestEvaluateGrid:
    def test_grid_shape_and_flags(self):
        mode = ModeState(ell=0, m=0, f0=gaussian_profile(0))
        params = PhysicalParams(H=1.0, m=1.0)
        field = evaluate_grid(mode, params, "riemann", [0.5, 1.0], [0.0, 0.7, 1.3])
        assert field.grid.values.shape == (2, 3)
        assert all(f == "ok" for row in field.grid.err_flags for f in row)
        samples = list(field.grid)
        assert len(samples) == 6
        assert samples[0].r == 0.5 and samples[0].t == 0.0
        assert samples[0].method == "riemann"

    def test_unknown_method_rejected(self):
        mode = ModeState(ell=0, m=0, f0=gaussian_profile(0))
        with pytest.raises(InvalidParam):
            evaluate_grid(mode, PhysicalParams(H=1.0, m=1.0), "bogus", [0.5], [0.0])

    def test_fieldgrid_rejects_unflagged_nonfinite(self):
        vals = np.array([[1.0 + 0j, math.nan]])
        with pytest.raises(InvalidParam):
            FieldGrid(
                r_values=(1.0,),
                t_values=(0.0, 1.0),
                values=vals,
                err_flags=[["ok", "ok"]],
            )
        # the same grid is fine once the bad entry is flagged
        grid = FieldGrid(
            r_values=(1.0,),
            t_values=(0.0, 1.0),
            values=vals,
            err_flags=[["ok", "ToleranceNotMet"]],
        )
        assert grid.sample(0, 1).err_flag == "ToleranceNotMet"


class TestDecayClassify:
    @pytest.mark.parametrize(
        "m,regime,expo,poly",
        [
            (0.5, "light", -1.5 + math.sqrt(2.0), 0.0),
            (1.2, "light", -1.5 + math.sqrt(2.25 - 1.44), 0.0),
            (SQRT2, "critical", -1.0, 0.0),
            (1.45, "intermediate", -1.0, 0.0),
            (1.5, "heavy", -1.0, 1.0),  # M = 0 exactly: polynomial correction
            (2.0, "heavy", -1.0, 0.0),
        ],
    )
    def test_regimes_h1(self, m, regime, expo, poly):
        rep = decay_classify(PhysicalParams(H=1.0, m=m))
        assert rep.regime == regime
        assert rep.predicted_exponent == pytest.approx(expo, rel=1e-12)
        assert rep.predicted_poly_power == poly

    def test_scaling_in_h(self):
        rep = decay_classify(PhysicalParams(H=2.0, m=2.0 * SQRT2))
        assert rep.regime == "critical"
        assert rep.predicted_exponent == -2.0

    def test_rejects_flat_space(self):
        with pytest.raises(InvalidParam):
            decay_classify(PhysicalParams(H=0.0, m=1.0))


class TestDecayFit:
    def test_synthetic_exponential_recovered_exactly(self):
        rep = decay_fit(lambda t: 3.0 * math.exp(-0.77 * t), (2.0, 12.0), 9)
        assert rep.regime == "synthetic"
        assert rep.fitted_exponent == pytest.approx(-0.77, abs=1e-12)
        assert rep.fit_residual < 1e-12
        assert math.isnan(rep.fitted_poly_power)

    def test_synthetic_poly_factor_recovered(self):
        rep = decay_fit(
            lambda t: (1.0 + t) ** 2 * math.exp(-0.5 * t),
            (2.0, 12.0),
            12,
            fit_poly_power=True,
        )
        assert rep.fitted_exponent == pytest.approx(-0.5, abs=1e-9)
        assert rep.fitted_poly_power == pytest.approx(2.0, abs=1e-8)

    def test_prediction_attached_when_params_given(self):
        rep = decay_fit(
            lambda t: math.exp(-t),
            (2.0, 10.0),
            8,
            params=PhysicalParams(H=1.0, m=SQRT2),
        )
        assert rep.regime == "critical"
        assert rep.predicted_exponent == -1.0
        assert rep.fitted_exponent == pytest.approx(-1.0, abs=1e-12)

    def test_underflow_raises_degenerate_fit(self):
        with pytest.raises(DegenerateFit):
            decay_fit(lambda t: 0.0, (1.0, 5.0), 6)

    def test_discard_fraction_trims_dips(self):
        def dipped(t):
            base = math.exp(-t)
            return base * (1e-6 if abs(t - 5.0) < 0.4 else 1.0)

        clean = decay_fit(dipped, (2.0, 10.0), 17, discard_fraction=0.2)
        assert clean.fitted_exponent == pytest.approx(-1.0, abs=1e-6)

    def test_window_validation(self):
        with pytest.raises(InvalidParam):
            decay_fit(lambda t: math.exp(-t), (5.0, 2.0), 8)
        with pytest.raises(InvalidParam):
            decay_fit(lambda t: math.exp(-t), (1.0, 5.0), 3)


class TestRemainderEnvelope:
    def test_heavy_envelope_has_no_residual_oscillation(self):
        # |remainder| e^{H t} settles to a constant; the oscillatory bulk
        # mode below it dies like e^{-t/2} and is invisible by t = 15
        mode = ModeState(ell=1, m=0, f0=gaussian_profile(1))
        params = PhysicalParams(H=1.0, m=2.0)
        lift = [
            abs(ita_remainder(mode, params, 0.7, t)) * math.exp(t)
            for t in (15.0, 18.5, 22.0)
        ]
        for v in lift[1:]:
            assert v == pytest.approx(lift[0], rel=1e-2)
