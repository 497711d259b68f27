"""
Replica overlap tests
"""

import math

import numpy as np
from django.test import SimpleTestCase

from overlap.samplers import (
    DimerSampler, FixedSampler, PhaseSampler, SeedSampler, ShiftSampler, SyntheticOverlapSource,
    get_sampler,
)
from overlap.services import (
    atom_scan, overlap, sample_overlap_distribution, task_seeds, ultrametricity_from_overlaps,
    ultrametricity_test,
)
from overlap.types import EmpiricalOverlapDistribution, OverlapError
from sequences.systems import generate

GOLDEN_ALPHA = (3 - math.sqrt(5)) / 2


class OverlapTest(SimpleTestCase):
    """Test the pairwise overlap and seeding"""

    def test_self_and_flip(self):
        """q(w, w) = 1 and q(w, -w) = -1"""
        window = generate('dimer', 100, seed=4)
        self.assertEqual(overlap(window, window), 1.0)
        self.assertEqual(overlap(window, window.flipped()), -1.0)

    def test_length_mismatch(self):
        with self.assertRaises(OverlapError):
            overlap(generate('thue-morse', 10), generate('thue-morse', 12))

    def test_task_seeds(self):
        """Seeds are a deterministic function of the master seed"""
        self.assertEqual(task_seeds(1, 5), task_seeds(1, 5))
        self.assertNotEqual(task_seeds(1, 5), task_seeds(2, 5))
        self.assertEqual(len(set(task_seeds(1, 1000))), 1000)
        with self.assertRaises(OverlapError):
            task_seeds(None, 3)

    def test_reproducible_across_workers(self):
        """Worker count does not change the samples"""
        sampler = SeedSampler('iid')
        one = sample_overlap_distribution(sampler, 600, 64, master_seed=9, workers=1)
        four = sample_overlap_distribution(sampler, 600, 64, master_seed=9, workers=4)
        self.assertTrue(np.array_equal(one.samples, four.samples))
        self.assertEqual([r.seed1 for r in one.records], [r.seed1 for r in four.records])

    def test_fixed_sampler(self):
        """A fixed window always overlaps itself fully"""
        dist = sample_overlap_distribution(FixedSampler(generate('fibonacci', 200)), 10, 100, master_seed=1)
        self.assertTrue(np.all(dist.samples == 1.0))
        with self.assertRaises(OverlapError):
            FixedSampler(generate('fibonacci', 20)).draw(0, 50)

    def test_shift_sampler_rejects_stochastic(self):
        with self.assertRaises(OverlapError):
            ShiftSampler('iid')

    def test_default_samplers(self):
        """Each system gets its natural sampler"""
        self.assertIsInstance(get_sampler('sturmian'), PhaseSampler)
        self.assertIsInstance(get_sampler('dimer'), DimerSampler)
        self.assertIsInstance(get_sampler('dimer', parity='odd'), SeedSampler)
        self.assertIsInstance(get_sampler('iid'), SeedSampler)
        self.assertIsInstance(get_sampler('thue-morse'), ShiftSampler)

    def test_bad_sizes(self):
        with self.assertRaises(OverlapError):
            sample_overlap_distribution(SeedSampler('iid'), 0, 10, master_seed=1)


class OverlapDistributionTest(SimpleTestCase):
    """Test empirical overlap laws of the built-in systems"""

    def test_iid_clt(self):
        """Independent i.i.d. windows have |q| <= 3/sqrt(N) at least 99% of the time"""
        N = 10 ** 4
        dist = sample_overlap_distribution(SeedSampler('iid'), 1000, N, master_seed=11)
        self.assertGreaterEqual(np.mean(np.abs(dist.samples) <= 3 / math.sqrt(N)), 0.99)

    def test_dimer_trivial(self):
        """Parity-mixed dimer replicas concentrate at q = 0"""
        dist = sample_overlap_distribution(DimerSampler(), 10 ** 4, 10 ** 4, master_seed=5)
        self.assertLessEqual(dist.std, 0.02)
        self.assertLess(abs(dist.mean), 0.01)

    def test_sturmian_law(self):
        """Uniform phases give one atom at 1 - 4*alpha and a continuous remainder"""
        dist = sample_overlap_distribution(PhaseSampler('golden'), 2000, 10 ** 4, master_seed=3)
        atoms = atom_scan(dist, 0.01, 0.05)
        self.assertEqual(len(atoms), 1)
        self.assertAlmostEqual(atoms[0].location, 1 - 4 * GOLDEN_ALPHA, delta=0.01)
        self.assertAlmostEqual(atoms[0].weight, 1 - 2 * GOLDEN_ALPHA, delta=0.04)

    def test_sturmian_convergence_in_N(self):
        """The overlap of a fixed phase pair is stable from N to 2N"""
        sampler = PhaseSampler('golden')
        N = 10 ** 5
        for s1, s2 in zip(task_seeds(21, 5), task_seeds(22, 5)):
            q_N = overlap(sampler.draw(s1, N), sampler.draw(s2, N))
            q_2N = overlap(sampler.draw(s1, 2 * N), sampler.draw(s2, 2 * N))
            self.assertLessEqual(abs(q_N - q_2N), 5e-3)

    def test_ks_stability(self):
        """Disjoint seed ranges give ECDFs within KS distance 0.03"""
        sampler = SeedSampler('iid')
        first = sample_overlap_distribution(sampler, 10 ** 4, 256, master_seed=100)
        second = sample_overlap_distribution(sampler, 10 ** 4, 256, master_seed=200)
        self.assertLessEqual(first.ks_distance(second), 0.03)

    def test_period_doubling_atoms(self):
        """Shift-sampled period-doubling has a discrete law with its largest atom at -1/3"""
        dist = sample_overlap_distribution(ShiftSampler('period-doubling'), 2000, 1 << 14, master_seed=8)
        atoms = atom_scan(dist, 0.01, 0.05)
        self.assertGreaterEqual(len(atoms), 2)
        self.assertAlmostEqual(atoms[0].location, -1 / 3, delta=0.01)
        self.assertAlmostEqual(atoms[0].weight, 0.5, delta=0.05)

    def test_paperfolding_atoms(self):
        """Paperfolding overlaps sit at 0 for odd shift differences"""
        dist = sample_overlap_distribution(ShiftSampler('paperfolding'), 2000, 1 << 14, master_seed=8)
        atoms = atom_scan(dist, 0.01, 0.05)
        self.assertGreaterEqual(len(atoms), 2)
        self.assertAlmostEqual(atoms[0].location, 0.0, delta=0.01)
        self.assertAlmostEqual(atoms[0].weight, 0.5, delta=0.05)

    def test_ecdf_and_summary(self):
        """ECDF is a right-continuous step function"""
        dist = EmpiricalOverlapDistribution(np.array([0.5, -0.5, 0.0, 0.5]), 10)
        self.assertEqual(dist.ecdf(-1.0), 0.0)
        self.assertEqual(dist.ecdf(0.0), 0.5)
        self.assertEqual(dist.ecdf(0.5), 1.0)
        self.assertEqual(dist.summary()['M'], 4)
        self.assertAlmostEqual(dist.ea_parameter, 0.125)

    def test_out_of_range_samples(self):
        with self.assertRaises(OverlapError):
            EmpiricalOverlapDistribution(np.array([1.5]), 10)


class AtomScanTest(SimpleTestCase):
    """Test atom detection on synthetic laws"""

    def test_synthetic_mixture(self):
        """Half mass at 0.2 plus uniform noise gives one atom of weight 1/2"""
        source = SyntheticOverlapSource(-1.0, 1.0, atom_location=0.2, atom_weight=0.5)
        dist = sample_overlap_distribution(source, 10 ** 4, 1, master_seed=42)
        atoms = atom_scan(dist, 0.01, 0.05)
        self.assertEqual(len(atoms), 1)
        self.assertAlmostEqual(atoms[0].location, 0.2, delta=0.01)
        self.assertAlmostEqual(atoms[0].weight, 0.5, delta=0.03)

    def test_continuous_law(self):
        """A uniform law has no atoms"""
        dist = sample_overlap_distribution(SyntheticOverlapSource(), 10 ** 4, 1, master_seed=42)
        self.assertEqual(atom_scan(dist, 0.01, 0.05), [])

    def test_parameters(self):
        dist = EmpiricalOverlapDistribution(np.array([0.0]), 1)
        with self.assertRaises(OverlapError):
            atom_scan(dist, 0.0, 0.05)
        with self.assertRaises(OverlapError):
            atom_scan(dist, 0.01, 0.0)
        with self.assertRaises(OverlapError):
            atom_scan(dist, 0.01, 1.0)

    def test_weight_must_exceed_threshold(self):
        """A cluster holding exactly min_weight of the mass is not an atom"""
        samples = np.concatenate((np.full(25, 0.5), np.linspace(-0.9, 0.3, 75)))
        dist = EmpiricalOverlapDistribution(samples, 1)
        self.assertEqual(atom_scan(dist, 0.001, 0.25), [])
        atoms = atom_scan(dist, 0.001, 0.24)
        self.assertEqual(len(atoms), 1)
        self.assertEqual(atoms[0].location, 0.5)
        self.assertEqual(atoms[0].weight, 0.25)

    def test_synthetic_validation(self):
        with self.assertRaises(OverlapError):
            SyntheticOverlapSource(0.5, -0.5)


class UltrametricityTest(SimpleTestCase):
    """Test triple statistics"""

    def test_counting(self):
        """Only triples whose two smallest overlaps differ by more than epsilon count"""
        report = ultrametricity_from_overlaps([[0.1, 0.1, 0.9], [0.1, 0.5, 0.9], [0.3, 0.31, 0.2]], 0.02)
        self.assertEqual(report.triples, 3)
        self.assertEqual(report.violations, 2)
        self.assertAlmostEqual(report.max_violation, 0.4)

    def test_period_doubling_ultrametric(self):
        """Period-doubling triples are ultrametric"""
        report = ultrametricity_test(ShiftSampler('period-doubling'), 1000, 1 << 16, 0.02, master_seed=6)
        self.assertLessEqual(report.violation_fraction, 0.05)

    def test_paperfolding_violations(self):
        """Paperfolding triples violate ultrametricity about 3/8 of the time"""
        report = ultrametricity_test(ShiftSampler('paperfolding'), 1000, 1 << 16, 0.02, master_seed=6)
        self.assertGreaterEqual(report.violation_fraction, 0.3)
        self.assertLessEqual(report.violation_fraction, 0.45)

    def test_independent_control(self):
        """Independent uniform overlaps are far from ultrametric"""
        report = ultrametricity_test(SyntheticOverlapSource(), 1000, 1, 0.02, master_seed=6)
        self.assertGreaterEqual(report.violation_fraction, 0.3)

    def test_needs_triples(self):
        with self.assertRaises(OverlapError):
            ultrametricity_test(SyntheticOverlapSource(), 0, 1, 0.02, master_seed=1)
