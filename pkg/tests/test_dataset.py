import numpy as np
import pytest

from signdigit import synth
from signdigit.dataset import (
    ClassTooSmallError,
    EmptyDatasetError,
    SplitSpec,
    UnknownClassDirectoryError,
    batches,
    load_dataset,
    stratified_split,
)
from signdigit.imaging import RasterImage, encode_netpbm


def write_tree(root, per_class, classes=range(10)):
    rng = np.random.default_rng(0)
    for digit in classes:
        d = root / str(digit)
        d.mkdir(parents=True)
        for i in range(per_class):
            img = RasterImage.from_array(rng.integers(0, 256, (32, 32), dtype=np.uint8))
            (d / f"img_{i}.pgm").write_bytes(encode_netpbm(img))


def test_load_labels_by_directory(tmp_path):
    (tmp_path / "7").mkdir()
    rng = np.random.default_rng(1)
    for i in range(3):
        img = RasterImage.from_array(rng.integers(0, 256, (8, 8), dtype=np.uint8))
        (tmp_path / "7" / f"x{i}.pgm").write_bytes(encode_netpbm(img))
    manifest = load_dataset(tmp_path)
    assert len(manifest.entries) == 3
    assert all(e.label == 7 for e in manifest.entries)
    assert manifest.per_class_counts()[7] == 3


def test_load_rejects_unknown_class_directory(tmp_path):
    (tmp_path / "3").mkdir()
    (tmp_path / "x").mkdir()
    with pytest.raises(UnknownClassDirectoryError, match="x"):
        load_dataset(tmp_path)


def test_load_rejects_empty_root(tmp_path):
    with pytest.raises(EmptyDatasetError):
        load_dataset(tmp_path)


def test_load_skips_undecodable_files(tmp_path):
    write_tree(tmp_path, 2, classes=[1])
    (tmp_path / "1" / "broken.pgm").write_bytes(b"P5 4 4 255\n")  # truncated
    manifest = load_dataset(tmp_path)
    assert len(manifest.entries) == 2
    assert len(manifest.skipped) == 1
    assert "broken.pgm" in manifest.skipped[0][0]


def test_load_is_path_ordered(tmp_path):
    write_tree(tmp_path, 4, classes=[2, 5])
    a = load_dataset(tmp_path)
    b = load_dataset(tmp_path)
    assert [e.path for e in a.entries] == [e.path for e in b.entries]
    assert [e.path for e in a.entries] == sorted(e.path for e in a.entries)


def test_manifest_csv(tmp_path):
    write_tree(tmp_path, 1, classes=[0, 9])
    csv = load_dataset(tmp_path).to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "path,label"
    assert lines[1].endswith(",0") and lines[2].endswith(",9")


def test_split_published_counts(tmp_path):
    # 320 per class at the default fraction -> 250 train / 70 test per class
    root = tmp_path / "data"
    synth.write_dataset_tree(root, per_class=320, seed=0)
    manifest = load_dataset(root)
    train, test = stratified_split(manifest, SplitSpec(seed=1))
    labels = [e.label for e in manifest.entries]
    for digit in range(10):
        assert sum(1 for i in train if labels[i] == digit) == 250
        assert sum(1 for i in test if labels[i] == digit) == 70


def test_split_small_fraction(tmp_path):
    write_tree(tmp_path, 10)
    manifest = load_dataset(tmp_path)
    train, test = stratified_split(manifest, SplitSpec(test_fraction=0.2, seed=0))
    labels = [e.label for e in manifest.entries]
    for digit in range(10):
        assert sum(1 for i in train if labels[i] == digit) == 8
        assert sum(1 for i in test if labels[i] == digit) == 2


def test_split_is_partition_and_deterministic(tmp_path):
    write_tree(tmp_path, 5)
    manifest = load_dataset(tmp_path)
    t1 = stratified_split(manifest, SplitSpec(test_fraction=0.3, seed=7))
    t2 = stratified_split(manifest, SplitSpec(test_fraction=0.3, seed=7))
    assert t1 == t2
    train, test = t1
    assert set(train) | set(test) == set(range(len(manifest.entries)))
    assert set(train) & set(test) == set()


def test_split_rejects_tiny_class(tmp_path):
    write_tree(tmp_path, 1)
    with pytest.raises(ClassTooSmallError):
        stratified_split(load_dataset(tmp_path))


def test_split_spec_validation():
    with pytest.raises(ValueError):
        SplitSpec(test_fraction=0.0)
    with pytest.raises(ValueError):
        SplitSpec(test_fraction=1.0)


def test_batches_shapes_and_partition():
    got = batches(range(10), 3, seed=0, epoch=0)
    assert [len(b) for b in got] == [3, 3, 3, 1]
    flat = [i for b in got for i in b]
    assert sorted(flat) == list(range(10))


def test_batches_differ_across_epochs():
    a = batches(range(128), 16, seed=5, epoch=0)
    b = batches(range(128), 16, seed=5, epoch=1)
    assert a != b
    assert batches(range(128), 16, seed=5, epoch=0) == a


def test_batches_rejects_bad_size():
    with pytest.raises(ValueError):
        batches(range(4), 0, seed=0, epoch=0)
