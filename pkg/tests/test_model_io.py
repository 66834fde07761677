import io
import struct

import numpy as np
import pytest

from conftest import tiny_spec
from signdigit import nn
from signdigit.model_io import (
    MAGIC,
    BadMagicError,
    CorruptExtentsError,
    TruncatedModelError,
    UnsupportedVersionError,
    load_model,
    save_model,
)
from signdigit.train import predict


def roundtrip(spec, params):
    buf = io.BytesIO()
    save_model(spec, params, buf)
    return load_model(buf.getvalue())


def test_roundtrip_preserves_every_bit():
    spec = nn.default_architecture()
    params = nn.init_params(spec, 21)
    spec2, params2 = roundtrip(spec, params)
    assert spec2 == spec
    for i in params:
        np.testing.assert_array_equal(params[i][0], params2[i][0])
        np.testing.assert_array_equal(params[i][1], params2[i][1])


def test_save_is_deterministic():
    spec = tiny_spec(side=32)
    params = nn.init_params(spec, 3)
    a, b = io.BytesIO(), io.BytesIO()
    save_model(spec, params, a)
    save_model(spec, params, b)
    assert a.getvalue() == b.getvalue()


def test_byte_count_closed_form():
    spec = tiny_spec(side=32)
    params = nn.init_params(spec, 0)
    buf = io.BytesIO()
    count = save_model(spec, params, buf)
    assert count == len(buf.getvalue())

    expected = 4 + 4 + 4  # magic + version + layer count
    for layer in spec.layers:
        fields = 1 if layer.kind in ("conv2d", "dense") else (2 if layer.kind == "dropout" else 0)
        expected += 1 + 4 * fields
    for w, b in params.values():
        expected += (4 + 4 * w.ndim + 8 * w.size) + (4 + 4 * b.ndim + 8 * b.size)
    assert count == expected


def test_default_architecture_payload_size():
    spec = nn.default_architecture()
    params = nn.init_params(spec, 0)
    buf = io.BytesIO()
    save_model(spec, params, buf)
    payload = sum(8 * w.size + 8 * b.size for w, b in params.values())
    assert payload == 315146 * 8
    assert len(buf.getvalue()) > payload


def test_dropout_rate_survives_bit_exact():
    spec = nn.default_architecture(dropout_rates=(0.17, 1 / 3))
    params = nn.init_params(spec, 1)
    spec2, _ = roundtrip(spec, params)
    rates = [l.rate for l in spec2.layers if l.kind == "dropout"]
    assert rates == [0.17, 1 / 3]  # exact float equality


def test_predictions_identical_after_reload(overfit_model, fixture_digits):
    spec, params = overfit_model
    imgs, _ = fixture_digits
    buf = io.BytesIO()
    save_model(spec, params, buf)
    spec2, params2 = load_model(buf.getvalue())
    for img in imgs:
        d1, p1 = predict(spec, params, img)
        d2, p2 = predict(spec2, params2, img)
        assert d1 == d2
        np.testing.assert_array_equal(p1, p2)


def test_bad_magic_rejected():
    spec = tiny_spec(side=32)
    buf = io.BytesIO()
    save_model(spec, nn.init_params(spec, 0), buf)
    blob = bytearray(buf.getvalue())
    blob[0] ^= 0xFF
    with pytest.raises(BadMagicError):
        load_model(bytes(blob))


def test_unsupported_version_rejected():
    spec = tiny_spec(side=32)
    buf = io.BytesIO()
    save_model(spec, nn.init_params(spec, 0), buf)
    blob = bytearray(buf.getvalue())
    blob[4:8] = struct.pack("<I", 99)
    with pytest.raises(UnsupportedVersionError):
        load_model(bytes(blob))


def test_truncated_stream_rejected():
    spec = tiny_spec(side=32)
    buf = io.BytesIO()
    save_model(spec, nn.init_params(spec, 0), buf)
    blob = buf.getvalue()
    with pytest.raises(TruncatedModelError):
        load_model(blob[:-9])  # cuts into the final tensor
    with pytest.raises(TruncatedModelError):
        load_model(blob[:3])  # cuts into the magic itself


def test_corrupt_extents_rejected_before_allocation():
    # plausible header (flatten -> dense -> softmax), then absurd extents
    blob = MAGIC + struct.pack("<II", 1, 3)
    blob += struct.pack("<B", 5)  # flatten
    blob += struct.pack("<BI", 6, 4)  # dense(4)
    blob += struct.pack("<B", 7)  # softmax
    blob += struct.pack("<II", 1, 0xFFFFFFFF)  # rank-1 tensor, 4 billion elements
    with pytest.raises(CorruptExtentsError):
        load_model(blob)


def test_trailing_garbage_rejected():
    spec = tiny_spec(side=32)
    buf = io.BytesIO()
    save_model(spec, nn.init_params(spec, 0), buf)
    with pytest.raises(Exception):
        load_model(buf.getvalue() + b"extra")


def test_save_rejects_non_pipeline_input_shape():
    spec = tiny_spec(side=8)
    with pytest.raises(ValueError):
        save_model(spec, nn.init_params(spec, 0), io.BytesIO())


def test_file_path_roundtrip(tmp_path):
    spec = tiny_spec(side=32)
    params = nn.init_params(spec, 5)
    path = tmp_path / "model.sdb"
    save_model(spec, params, path)
    spec2, params2 = load_model(path)
    assert spec2 == spec
    np.testing.assert_array_equal(params[0][0], params2[0][0])
