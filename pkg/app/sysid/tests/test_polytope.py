"""Tests for simplex weights and polytopic models"""
import numpy as np

from django.test import SimpleTestCase

from sysid import polytope
from sysid.cyclic import VertexSet
from sysid.exceptions import DimensionError, SimplexError
from sysid.plants import BENCHMARK
from sysid.statespace import StateSpaceModel


def create_scalar_polytope(values):
    """Polytope of first order vertices A_i = B_i = C_i = D_i = value"""
    vertices = tuple(
        StateSpaceModel([[v]], [[v]], [[v]], [[v]]) for v in values
    )
    return polytope.PolytopeModel(VertexSet(vertices, len(vertices)))


def create_random_polytope(rng, count):
    vertices = tuple(
        StateSpaceModel(
            0.3 * rng.standard_normal((3, 3)),
            rng.standard_normal((3, 1)),
            rng.standard_normal((2, 3)),
        )
        for _ in range(count)
    )
    return polytope.PolytopeModel(VertexSet(vertices, count))


class ValidateSimplexTests(SimpleTestCase):
    """Test checking weights against the simplex"""

    def test_valid_weights(self):
        """Test six weights summing to one are accepted"""
        weights = [0.2029, 0.1438, 0.1426, 0.1815, 0.1680, 0.1612]

        check = polytope.validate_simplex(weights, tolerance=1e-4)

        self.assertTrue(check)
        self.assertAlmostEqual(check.total, 1.0)

    def test_sum_above_one(self):
        """Test (0.5, 0.6) is off the simplex by 0.1"""
        check = polytope.validate_simplex([0.5, 0.6])

        self.assertFalse(check.valid)
        self.assertAlmostEqual(check.violation, 0.1)

    def test_negative_entry(self):
        """Test a negative entry is rejected even with the right sum"""
        check = polytope.validate_simplex([-0.01, 1.01])

        self.assertFalse(check.valid)
        self.assertAlmostEqual(check.violation, 0.01)

    def test_empty_weights(self):
        """Test no weights is never on the simplex"""
        self.assertFalse(polytope.validate_simplex([]))

    def test_simplex_weights_reject_invalid(self):
        """Test the weights container refuses off-simplex values"""
        with self.assertRaises(SimplexError):
            polytope.SimplexWeights([0.5, 0.6])
        with self.assertRaises(SimplexError):
            polytope.SimplexWeights([-0.01, 1.01])

    def test_simplex_weights_are_read_only(self):
        """Test accepted weights cannot be changed"""
        weights = polytope.SimplexWeights([0.25, 0.75])

        with self.assertRaises(ValueError):
            weights.weights[0] = 1.0


class UniformWeightsTests(SimpleTestCase):
    """Test the uniform starting point"""

    def test_sums_to_one(self):
        """Test sevenths still sum to one"""
        weights = polytope.uniform_weights(7)

        self.assertEqual(len(weights), 7)
        self.assertAlmostEqual(sum(weights), 1.0, places=15)

    def test_single_vertex(self):
        """Test one vertex gets all the weight"""
        self.assertEqual(polytope.uniform_weights(1).tolist(), [1.0])

    def test_zero_count_rejected(self):
        """Test there must be at least one vertex"""
        with self.assertRaises(DimensionError):
            polytope.uniform_weights(0)


class PolytopeModelTests(SimpleTestCase):
    """Test evaluating polytopic models"""

    def test_vertex_weights_give_the_vertex(self):
        """Test w = e_i returns vertex i"""
        model = create_random_polytope(np.random.default_rng(1), 4)

        for i, vertex in enumerate(model.vertex_set):
            weights = np.zeros(4)
            weights[i] = 1.0
            self.assertTrue(model.evaluate(weights).allclose(vertex, atol=0))

    def test_identical_vertices(self):
        """Test any weights of identical vertices give that vertex"""
        model = polytope.PolytopeModel(VertexSet((BENCHMARK,) * 3, 3))

        combined = model.evaluate([0.2, 0.5, 0.3])

        self.assertTrue(combined.allclose(BENCHMARK, atol=1e-12))

    def test_scalar_combination(self):
        """Test a hand-computed scalar mixture"""
        model = create_scalar_polytope([1.0, 2.0, 4.0])

        combined = model.evaluate([0.5, 0.25, 0.25])

        for matrix in combined.matrices():
            self.assertAlmostEqual(matrix.item(), 2.0)

    def test_affine_in_the_weights(self):
        """Test mixing two weight vectors mixes the resulting models"""
        model = create_random_polytope(np.random.default_rng(2), 5)
        rng = np.random.default_rng(3)
        w1 = rng.dirichlet(np.ones(5))
        w2 = rng.dirichlet(np.ones(5))

        mixed = model.evaluate(0.3 * w1 + 0.7 * w2)
        first = model.evaluate(w1)
        second = model.evaluate(w2)

        for m, a, b in zip(mixed.matrices(), first.matrices(),
                           second.matrices()):
            np.testing.assert_allclose(m, 0.3 * a + 0.7 * b, atol=1e-12)

    def test_permutation_invariance(self):
        """Test reordering vertices and weights together changes nothing"""
        model = create_random_polytope(np.random.default_rng(4), 4)
        weights = np.array([0.1, 0.2, 0.3, 0.4])
        order = [2, 0, 3, 1]
        permuted = polytope.PolytopeModel(VertexSet(
            tuple(model.vertex_set[i] for i in order), 4
        ))

        self.assertTrue(
            permuted.evaluate(weights[order]).allclose(
                model.evaluate(weights), atol=1e-12
            )
        )

    def test_entries_stay_within_vertex_bounds(self):
        """Test each combined entry lies between the vertex extremes"""
        model = create_random_polytope(np.random.default_rng(5), 6)
        weights = np.random.default_rng(6).dirichlet(np.ones(6))

        combined = model.evaluate(weights).A
        stack = np.stack([vertex.A for vertex in model.vertex_set])

        self.assertTrue(np.all(combined >= stack.min(axis=0) - 1e-12))
        self.assertTrue(np.all(combined <= stack.max(axis=0) + 1e-12))

    def test_weight_count_mismatch(self):
        """Test the number of weights must match the vertices"""
        model = create_scalar_polytope([1.0, 2.0, 3.0])

        with self.assertRaises(DimensionError):
            model.evaluate([0.5, 0.5])

    def test_off_simplex_weights_rejected(self):
        """Test evaluation refuses weights off the simplex"""
        model = create_scalar_polytope([1.0, 2.0])

        with self.assertRaises(SimplexError):
            model.evaluate([0.5, 0.6])

    def test_to_dict(self):
        """Test the listing carries dimensions, vertices and metadata"""
        model = polytope.PolytopeModel(VertexSet((BENCHMARK,) * 2, 2))

        data = model.to_dict(seed=3)

        self.assertEqual(data['seed'], 3)
        self.assertEqual((data['period'], data['n'], data['q']), (2, 3, 2))
        self.assertEqual(len(data['vertices']), 2)
