import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import edit_distance_recursive
from synth import block_text_image
from scenetext import dataset as ds
from scenetext import detector, evaluation
from scenetext.detector import DetectorConfig, TextRegion
from scenetext.image import save_image

TURKISH = "abcçdeğiİıoöşuüABC kmnrst"

turkish_text = st.text(alphabet=TURKISH, max_size=12)


class TestEditDistance:
    def test_identity(self):
        assert evaluation.edit_distance("kitap", "kitap") == 0

    def test_single_substitution(self):
        assert evaluation.edit_distance("kitap", "kitab") == 1

    def test_turkish_letters_are_single_units(self):
        assert evaluation.edit_distance("ÇIKIŞ", "CIKIS") == 2
        assert evaluation.edit_distance("İç", "Iç") == 1

    @given(a=turkish_text, b=turkish_text)
    def test_matches_recursive_oracle(self, a, b):
        assert evaluation.edit_distance(a, b) == edit_distance_recursive(a, b)

    @given(a=turkish_text, b=turkish_text, c=turkish_text)
    def test_metric_properties(self, a, b, c):
        dab = evaluation.edit_distance(a, b)
        assert dab == evaluation.edit_distance(b, a)
        assert (dab == 0) == (a == b)
        assert dab <= evaluation.edit_distance(a, c) + evaluation.edit_distance(c, b)


class TestScoreImage:
    def test_perfect_match(self):
        result = evaluation.score_image("DURAK", "DURAK")
        assert result.char_count == 5 and result.accuracy == 1.0

    def test_errors_clamped_to_char_count(self):
        result = evaluation.score_image("ABC", "XYZXYZ")
        assert result.raw_errors == 6
        assert result.clamped_errors == 3
        assert result.accuracy == 0.0

    def test_single_error_fraction(self):
        assert evaluation.score_image("kitap", "kitab").accuracy == pytest.approx(0.8)

    def test_comparison_is_case_sensitive(self):
        assert evaluation.score_image("DURAK", "durak").accuracy == 0.0

    def test_empty_ground_truth_conventions(self):
        assert evaluation.score_image("", "").accuracy == 1.0
        assert evaluation.score_image("", "noise").accuracy == 0.0
        assert evaluation.score_image("", "noise").clamped_errors == 0

    def test_whitespace_normalization_collapses_runs(self):
        result = evaluation.score_image("BİR  İKİ\nÜÇ", "BİR İKİ ÜÇ")
        assert result.accuracy == 1.0

    def test_normalization_can_be_disabled(self):
        result = evaluation.score_image("A B", "A\nB", normalize=False)
        assert result.raw_errors == 1


class TestAggregate:
    def test_even_split(self):
        results = [
            evaluation.ImageEvalResult("a", 10, 0, 0, 1.0),
            evaluation.ImageEvalResult("b", 10, 10, 10, 0.0),
        ]
        assert evaluation.aggregate(results).overall_accuracy == pytest.approx(0.5)

    def test_single_image_equals_its_accuracy(self):
        result = evaluation.score_image("kitap", "kitab", image_id="x")
        assert evaluation.aggregate([result]).overall_accuracy == pytest.approx(0.8)

    def test_character_weighting_not_mean_of_accuracies(self):
        results = [
            evaluation.ImageEvalResult("a", 90, 9, 9, 0.9),
            evaluation.ImageEvalResult("b", 10, 10, 10, 0.0),
        ]
        report = evaluation.aggregate(results)
        assert report.overall_accuracy == pytest.approx(0.81)
        assert report.overall_accuracy != pytest.approx(0.45)

    def test_totals_are_sums(self):
        results = [
            evaluation.ImageEvalResult("a", 7, 2, 2, 5 / 7),
            evaluation.ImageEvalResult("b", 3, 5, 3, 0.0),
        ]
        report = evaluation.aggregate(results)
        assert report.total_chars == 10 and report.total_clamped_errors == 5

    def test_permutation_invariant(self, rng):
        results = [
            evaluation.ImageEvalResult(f"i{k}", int(n), int(e), min(int(e), int(n)), 0.0)
            for k, (n, e) in enumerate(zip(rng.integers(1, 50, 10), rng.integers(0, 60, 10)))
        ]
        shuffled = list(results)
        rng.shuffle(shuffled)
        assert (
            evaluation.aggregate(results).overall_accuracy
            == evaluation.aggregate(shuffled).overall_accuracy
        )

    def test_empty_list_is_an_error(self):
        with pytest.raises(ValueError):
            evaluation.aggregate([])


class TestDetectionDiagnostics:
    def gt(self, boxes):
        return ds.GroundTruthAnnotation(
            "g", 1000, 1000, [ds.AnnotationBox(x, y, w, h, "") for x, y, w, h in boxes]
        )

    def test_perfect_match(self):
        boxes = [(10, 10, 50, 20), (10, 100, 60, 25)]
        pred = [TextRegion(*b) for b in boxes]
        diag = evaluation.detection_diagnostics(pred, self.gt(boxes))
        assert diag.precision == 1.0 and diag.recall == 1.0
        assert len(diag.matched_pairs) == 2

    def test_no_predictions_is_vacuous_precision(self):
        diag = evaluation.detection_diagnostics([], self.gt([(0, 0, 10, 10)]))
        assert diag.precision == 1.0 and diag.recall == 0.0

    def test_half_overlap_below_threshold(self):
        pred = [TextRegion(0, 0, 20, 10)]  # IoU with (10,0,20,10) = 100/300
        diag = evaluation.detection_diagnostics(pred, self.gt([(10, 0, 20, 10)]), 0.5)
        assert diag.matched_pairs == []
        assert diag.precision == 0.0 and diag.recall == 0.0

    def test_greedy_matching_is_one_to_one(self):
        pred = [TextRegion(0, 0, 100, 20), TextRegion(2, 0, 100, 20)]
        diag = evaluation.detection_diagnostics(pred, self.gt([(0, 0, 100, 20)]), 0.5)
        assert len(diag.matched_pairs) == 1
        assert diag.matched_pairs[0][:2] == (0, 0)


class TestBenchmark:
    def make_manifest(self, tmp_path, rng, n=2):
        for i in range(n):
            img, _ = block_text_image(rng, width=320, height=240, n_lines=1, max_height=40)
            save_image(img, tmp_path / f"bench_{i}.png")
        return ds.scan_dataset(tmp_path)

    def test_summary_is_mean_over_images(self, tmp_path, rng):
        manifest = self.make_manifest(tmp_path, rng)
        timings = evaluation.run_benchmark(manifest, DetectorConfig(), repetitions=2)
        assert set(timings.summary) == set(detector.STAGES)
        for stage in detector.STAGES:
            values = [timings.per_image[e.image_id][stage] for e in manifest.entries]
            assert timings.summary[stage] == pytest.approx(np.mean(values))

    def test_total_positive_and_dominant(self, tmp_path, rng):
        manifest = self.make_manifest(tmp_path, rng, n=1)
        timings = evaluation.run_benchmark(manifest, DetectorConfig(), repetitions=1)
        per = next(iter(timings.per_image.values()))
        assert per["total"] > 0
        sub = sum(per[s] for s in detector.STAGES if s != "total")
        assert per["total"] >= 0.9 * sub  # sub-stages nest inside total

    def test_timing_never_alters_detections(self, tmp_path, rng):
        img, _ = block_text_image(rng, width=320, height=240, n_lines=2, max_height=40)
        cfg = DetectorConfig()
        timer = detector.StageTimer()
        assert detector.detect(img, cfg, timer=timer) == detector.detect(img, cfg)

    def test_rejects_zero_repetitions(self, tmp_path, rng):
        manifest = self.make_manifest(tmp_path, rng, n=1)
        with pytest.raises(ValueError):
            evaluation.run_benchmark(manifest, DetectorConfig(), repetitions=0)
