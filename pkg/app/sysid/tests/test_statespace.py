"""Tests for state-space models, simulation and canonical forms"""
import numpy as np

from django.test import SimpleTestCase

from sysid import statespace
from sysid.exceptions import (
    DimensionError,
    IdentificationError,
    SignalLengthError,
    SingularTransformError,
    UnsupportedModelError,
)
from sysid.plants import BENCHMARK, BENCHMARK_ORIGINAL
from sysid.statespace import NoiseSpec, StateSpaceModel


def create_scalar_model(a=0.5, b=2.0, c=3.0, d=1.0):
    """Create a first order SISO model"""
    return StateSpaceModel([[a]], [[b]], [[c]], [[d]])


def create_random_siso(seed, order=3):
    """Create a random controllable SISO model"""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((order, order))
    # Scale into the unit disc so simulations stay bounded
    A *= 0.9 / max(abs(np.linalg.eigvals(A)))
    return StateSpaceModel(
        A,
        rng.standard_normal((order, 1)),
        rng.standard_normal((2, order)),
    )


class StateSpaceModelTests(SimpleTestCase):
    """Test the model container"""

    def test_dimensions(self):
        """Test n, m and q are read off the matrices"""
        self.assertEqual(BENCHMARK.dims, (3, 1, 2))

    def test_missing_d_is_zero(self):
        """Test D defaults to a zero feedthrough"""
        model = StateSpaceModel([[0.5]], [[1.0], ], [[1.0], [2.0]])

        self.assertEqual(model.D.shape, (2, 1))
        self.assertFalse(model.D.any())

    def test_inconsistent_dimensions_rejected(self):
        """Test a B with the wrong number of rows is rejected"""
        with self.assertRaises(DimensionError):
            StateSpaceModel(np.eye(2), [[1.0]], [[1.0, 0.0]])

    def test_non_finite_entries_rejected(self):
        """Test NaN entries are rejected"""
        with self.assertRaises(IdentificationError):
            StateSpaceModel([[np.nan]], [[1.0]], [[1.0]])

    def test_matrices_are_read_only(self):
        """Test models can be shared without being modified"""
        with self.assertRaises(ValueError):
            BENCHMARK.A[0, 0] = 1.0

    def test_dict_round_trip(self):
        """Test serialization keeps every matrix"""
        data = BENCHMARK.to_dict()

        self.assertEqual((data['n'], data['m'], data['q']), (3, 1, 2))
        self.assertTrue(StateSpaceModel.from_dict(data).allclose(BENCHMARK))

    def test_from_dict_checks_declared_dims(self):
        """Test declared dimensions must match the matrices"""
        data = BENCHMARK.to_dict()
        data['n'] = 4

        with self.assertRaises(DimensionError):
            StateSpaceModel.from_dict(data)


class SimulationTests(SimpleTestCase):
    """Test noisy and noise-free simulation"""

    def test_zero_input_gives_zero_output(self):
        """Test zero inputs, zero noise and zero state stay at zero"""
        record = statespace.simulate(BENCHMARK, np.zeros((20, 1)))

        self.assertFalse(record.outputs.any())

    def test_first_steps_by_hand(self):
        """Test an impulse against the hand-computed recursion"""
        inputs = np.zeros((3, 1))
        inputs[0] = 1.0

        record = statespace.simulate(BENCHMARK, inputs)

        np.testing.assert_allclose(record.outputs[0], [0.0, 0.0])
        # x(1) = B = e1, so y(1) is the first column of C
        np.testing.assert_allclose(record.outputs[1], [1.0, 3.0])

    def test_repeated_calls_are_identical(self):
        """Test simulation is deterministic given the seeds"""
        inputs = statespace.generate_gaussian_signal(1, 200, seed=4)
        process = NoiseSpec(0.0, 0.1, seed=5)
        observation = NoiseSpec(0.0, 0.05, seed=6)

        first = statespace.simulate(BENCHMARK, inputs, process, observation)
        second = statespace.simulate(BENCHMARK, inputs, process, observation)

        self.assertTrue(np.array_equal(first.outputs, second.outputs))

    def test_noise_changes_outputs(self):
        """Test observation noise is added to the outputs"""
        inputs = statespace.generate_gaussian_signal(1, 50, seed=1)
        clean = statespace.simulate(BENCHMARK, inputs)
        noisy = statespace.simulate(
            BENCHMARK, inputs, observation_noise=NoiseSpec(0.0, 0.1, 2)
        )

        self.assertFalse(np.allclose(clean.outputs, noisy.outputs))

    def test_input_dimension_mismatch(self):
        """Test inputs of the wrong width are rejected"""
        with self.assertRaises(DimensionError):
            statespace.simulate(BENCHMARK, np.zeros((10, 2)))

    def test_initial_state_dimension_mismatch(self):
        """Test x0 of the wrong size is rejected"""
        with self.assertRaises(DimensionError):
            statespace.simulate(BENCHMARK, np.zeros((10, 1)), x0=[1.0])

    def test_linearity(self):
        """Test noise-free simulation from zero state is linear"""
        u1 = statespace.generate_gaussian_signal(1, 100, seed=1)
        u2 = statespace.generate_gaussian_signal(1, 100, seed=2)

        combined = statespace.simulate(BENCHMARK, 2.0 * u1 - 0.5 * u2)
        first = statespace.simulate(BENCHMARK, u1)
        second = statespace.simulate(BENCHMARK, u2)

        np.testing.assert_allclose(
            combined.outputs, 2.0 * first.outputs - 0.5 * second.outputs,
            atol=1e-10,
        )

    def test_impulse_response_matches_markov_parameters(self):
        """Test impulse outputs equal the Markov parameters"""
        inputs = np.zeros((10, 1))
        inputs[0] = 1.0

        record = statespace.simulate(BENCHMARK, inputs)
        markov = statespace.markov_parameters(BENCHMARK, 10)

        for k in range(10):
            np.testing.assert_allclose(
                record.outputs[k], markov[k][:, 0], atol=1e-10
            )

    def test_noise_free_fast_path_agrees(self):
        """Test the transfer function simulation matches the recursion"""
        inputs = statespace.generate_gaussian_signal(1, 300, seed=9)

        expected = statespace.simulate(BENCHMARK, inputs).outputs
        fast = statespace.simulate_noise_free(BENCHMARK, inputs)

        np.testing.assert_allclose(fast, expected, atol=1e-9)


class GaussianSignalTests(SimpleTestCase):
    """Test seeded Gaussian signals"""

    def test_zero_std_gives_the_mean(self):
        """Test std_dev 0 yields a constant signal"""
        signal = statespace.generate_gaussian_signal(
            2, 10, mean=1.5, std_dev=0.0, seed=3
        )

        self.assertTrue(np.all(signal == 1.5))

    def test_sample_moments(self):
        """Test a long signal has the requested mean and spread"""
        signal = statespace.generate_gaussian_signal(1, 100000, seed=11)

        self.assertLess(abs(signal.mean()), 0.02)
        self.assertLess(abs(signal.std() - 1.0), 0.02)

    def test_same_seed_same_signal(self):
        """Test the generator is seeded"""
        first = statespace.generate_gaussian_signal(3, 50, seed=7)
        second = statespace.generate_gaussian_signal(3, 50, seed=7)

        self.assertTrue(np.array_equal(first, second))

    def test_nonpositive_length_rejected(self):
        """Test an empty signal cannot be generated"""
        with self.assertRaises(SignalLengthError):
            statespace.generate_gaussian_signal(1, 0)

    def test_negative_std_rejected(self):
        """Test noise specs reject a negative spread"""
        with self.assertRaises(IdentificationError):
            NoiseSpec(0.0, -1.0)


class MarkovParameterTests(SimpleTestCase):
    """Test impulse response matrices"""

    def test_scalar_system(self):
        """Test H = [d, cb, cab]"""
        markov = statespace.markov_parameters(create_scalar_model(), 3)

        self.assertEqual([h.item() for h in markov], [1.0, 6.0, 3.0])

    def test_zero_feedthrough(self):
        """Test H(0) is D"""
        markov = statespace.markov_parameters(BENCHMARK, 1)

        self.assertEqual(len(markov), 1)
        np.testing.assert_array_equal(markov[0], np.zeros((2, 1)))


class CanonicalFormTests(SimpleTestCase):
    """Test reachability checks and the companion form"""

    def test_benchmark_companion_form(self):
        """Test the original benchmark realization maps to the
        published companion coefficients
        """
        companion = statespace.to_controllable_companion(BENCHMARK_ORIGINAL)

        np.testing.assert_allclose(
            companion.A,
            [[0.0, 0.0, -0.3025], [1.0, 0.0, 0.58], [0.0, 1.0, 0.7]],
            atol=1e-10,
        )
        np.testing.assert_array_equal(companion.B, [[1.0], [0.0], [0.0]])
        np.testing.assert_allclose(
            companion.C, [[1.0, 1.9, 2.245], [3.0, 1.4, 1.71]], atol=1e-10
        )
        np.testing.assert_array_equal(companion.D, np.zeros((2, 1)))

    def test_companion_form_is_idempotent(self):
        """Test a model already in companion form is unchanged"""
        again = statespace.to_controllable_companion(BENCHMARK)

        self.assertTrue(again.allclose(BENCHMARK, atol=1e-12))

    def test_companion_preserves_markov_parameters(self):
        """Test the similarity transform keeps the impulse response"""
        for seed in range(5):
            model = create_random_siso(seed)
            companion = statespace.to_controllable_companion(model)

            original = statespace.markov_parameters(model, 10)
            transformed = statespace.markov_parameters(companion, 10)
            for h, h_c in zip(original, transformed):
                np.testing.assert_allclose(h_c, h, atol=1e-9)

    def test_multiple_inputs_unsupported(self):
        """Test the companion form needs a single input"""
        model = StateSpaceModel(np.eye(2) * 0.5, np.eye(2), np.eye(2))

        with self.assertRaises(UnsupportedModelError):
            statespace.to_controllable_companion(model)

    def test_uncontrollable_pair(self):
        """Test an uncontrollable pair cannot be transformed"""
        model = StateSpaceModel(np.diag([0.5, 0.5]), [[1.0], [1.0]],
                                [[1.0, 0.0]])

        with self.assertRaises(SingularTransformError):
            statespace.to_controllable_companion(model)

    def test_benchmark_is_controllable_and_observable(self):
        """Test the benchmark plant passes both rank tests"""
        report = statespace.check_controllability_observability(BENCHMARK)

        self.assertTrue(report.controllable)
        self.assertTrue(report.observable)
        self.assertEqual(report.controllability_rank, 3)

    def test_zero_b_is_uncontrollable(self):
        """Test B = 0 fails the controllability test"""
        model = StateSpaceModel(BENCHMARK.A, np.zeros((3, 1)), BENCHMARK.C)

        report = statespace.check_controllability_observability(model)

        self.assertFalse(report.controllable)
        self.assertTrue(report.observable)

    def test_zero_c_is_unobservable(self):
        """Test C = 0 fails the observability test"""
        model = StateSpaceModel(BENCHMARK.A, BENCHMARK.B, np.zeros((2, 3)))

        report = statespace.check_controllability_observability(model)

        self.assertFalse(report.observable)
