import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signdigit import imaging
from signdigit.imaging import (
    BinaryMask,
    BoundingBox,
    HsvThreshold,
    MalformedHeaderError,
    RasterImage,
    TruncatedDataError,
    UnsupportedMaxvalError,
    crop,
    decode_netpbm,
    encode_netpbm,
    largest_component_bbox,
    preprocess,
    resize_bilinear,
    rgb_to_hsv,
    skin_mask,
    to_grayscale,
)


def gray_image(values, width, height):
    return RasterImage(width, height, 1, bytes(values))


def rgb_constant(r, g, b, width=4, height=4):
    return RasterImage(width, height, 3, bytes([r, g, b] * (width * height)))


# --- netpbm ----------------------------------------------------------------


def test_decode_p5():
    img = decode_netpbm(b"P5 2 2 255\n" + bytes([0, 64, 128, 255]))
    assert (img.width, img.height, img.channels) == (2, 2, 1)
    assert img.pixels == bytes([0, 64, 128, 255])


def test_decode_p6_single_pixel():
    img = decode_netpbm(b"P6 1 1 255\n" + bytes([255, 0, 0]))
    assert (img.width, img.height, img.channels) == (1, 1, 3)
    assert img.pixels == bytes([255, 0, 0])


def test_decode_truncated():
    with pytest.raises(TruncatedDataError):
        decode_netpbm(b"P5 2 2 255\n")


def test_decode_bad_magic():
    with pytest.raises(MalformedHeaderError):
        decode_netpbm(b"P3 1 1 255\n0 0 0")


def test_decode_bad_maxval():
    with pytest.raises(UnsupportedMaxvalError):
        decode_netpbm(b"P5 1 1 65535\n\x00\x00")


def test_decode_accepts_comments_and_whitespace_runs():
    img = decode_netpbm(b"P5\n# a comment\n 2\t2\n255\n" + bytes(4))
    assert (img.width, img.height) == (2, 2)


def test_encode_magic_by_channels():
    assert encode_netpbm(gray_image([7], 1, 1)).startswith(b"P5")
    assert encode_netpbm(rgb_constant(1, 2, 3, 1, 1)).startswith(b"P6")


def test_canonical_stream_roundtrips_bit_exact():
    stream = b"P5 2 2 255\n" + bytes([0, 64, 128, 255])
    assert encode_netpbm(decode_netpbm(stream)) == stream


@settings(max_examples=50, deadline=None)
@given(
    w=st.integers(1, 9),
    h=st.integers(1, 9),
    channels=st.sampled_from([1, 3]),
    data=st.data(),
)
def test_decode_encode_identity(w, h, channels, data):
    payload = bytes(data.draw(st.lists(st.integers(0, 255), min_size=w * h * channels,
                                       max_size=w * h * channels)))
    img = RasterImage(w, h, channels, payload)
    stream = encode_netpbm(img)
    assert decode_netpbm(stream) == img
    assert encode_netpbm(decode_netpbm(stream)) == stream


# --- grayscale / hsv ---------------------------------------------------------


def test_grayscale_white_and_black():
    img = to_grayscale(rgb_constant(255, 255, 255, 1, 1))
    assert img.pixels == bytes([255])
    assert to_grayscale(rgb_constant(0, 0, 0, 1, 1)).pixels == bytes([0])


def test_grayscale_pure_red():
    # 0.299 * 255 = 76.245, rounded half away from zero
    assert to_grayscale(rgb_constant(255, 0, 0, 1, 1)).pixels == bytes([76])


def test_grayscale_identity_on_gray():
    img = gray_image([1, 2, 3, 4], 2, 2)
    assert to_grayscale(img) is img


def test_grayscale_range_and_idempotence():
    rng = np.random.default_rng(1)
    img = RasterImage.from_array(rng.integers(0, 256, (5, 7, 3), dtype=np.uint8))
    gray = to_grayscale(img)
    assert gray.channels == 1
    assert all(0 <= v <= 255 for v in gray.pixels)
    assert to_grayscale(gray) is gray


def test_hsv_pure_red():
    assert rgb_to_hsv(255, 0, 0) == (0.0, 1.0, 1.0)


def test_hsv_achromatic_gray():
    h, s, v = rgb_to_hsv(128, 128, 128)
    assert (h, s) == (0.0, 0.0)
    assert v == pytest.approx(128 / 255)


def test_hsv_orange_sector():
    h, s, v = rgb_to_hsv(255, 128, 0)
    assert h == pytest.approx(60.0 * 128 / 255)  # ~30.12
    assert (s, v) == (1.0, 1.0)


def _hsv_to_rgb_reference(h, s, v):
    # standard hexcone reconstruction, used as the inversion oracle
    c = v * s
    x = c * (1 - abs((h / 60.0) % 2 - 1))
    m = v - c
    sector = int(h // 60) % 6
    r, g, b = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][sector]
    return tuple(round((u + m) * 255) for u in (r, g, b))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_hsv_inverts_within_quantization(r, g, b):
    rr, gg, bb = _hsv_to_rgb_reference(*rgb_to_hsv(r, g, b))
    assert abs(rr - r) <= 1 and abs(gg - g) <= 1 and abs(bb - b) <= 1


# --- skin mask ---------------------------------------------------------------


def test_skin_mask_all_red_sets_all():
    mask = skin_mask(rgb_constant(255, 0, 0))
    assert mask.bits.all()


def test_skin_mask_all_blue_clears_all():
    mask = skin_mask(rgb_constant(0, 0, 255))
    assert not mask.bits.any()


def test_skin_mask_degenerate_interval():
    th = HsvThreshold(0, 50, 0.0, 0.0, 0.0, 1.0)
    assert not skin_mask(rgb_constant(255, 0, 0), th).bits.any()


def test_skin_mask_requires_color():
    with pytest.raises(imaging.ChannelCountError):
        skin_mask(gray_image([0], 1, 1))


def test_skin_mask_hue_wraparound():
    # magenta-ish red at hue ~350 passes a wrapped [330, 30] interval
    th = HsvThreshold(330, 30, 0.2, 1.0, 0.2, 1.0)
    assert skin_mask(rgb_constant(255, 0, 42), th).bits.all()


def test_skin_mask_monotone_under_widening():
    rng = np.random.default_rng(7)
    img = RasterImage.from_array(rng.integers(0, 256, (8, 8, 3), dtype=np.uint8))
    tight = HsvThreshold(10, 40, 0.3, 0.8, 0.3, 0.8)
    wide = HsvThreshold(0, 60, 0.1, 1.0, 0.1, 1.0)
    assert skin_mask(img, tight).bits.sum() <= skin_mask(img, wide).bits.sum()


# --- components / crop -------------------------------------------------------


def _bbox_oracle(bits):
    """Brute-force flood fill; largest first-seeded component's bbox."""
    h, w = bits.shape
    seen = np.zeros_like(bits, dtype=bool)
    best = None
    for y in range(h):
        for x in range(w):
            if not bits[y, x] or seen[y, x]:
                continue
            stack = [(y, x)]
            seen[y, x] = True
            pix = []
            while stack:
                cy, cx = stack.pop()
                pix.append((cy, cx))
                for ny, nx in ((cy - 1, cx), (cy + 1, cx), (cy, cx - 1), (cy, cx + 1)):
                    if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        stack.append((ny, nx))
            if best is None or len(pix) > best[0]:
                ys = [p[0] for p in pix]
                xs = [p[1] for p in pix]
                best = (len(pix), BoundingBox(min(xs), min(ys),
                                              max(xs) - min(xs) + 1, max(ys) - min(ys) + 1))
    return best[1]


def test_bbox_singleton():
    bits = np.zeros((8, 8), dtype=bool)
    bits[3, 5] = True
    assert largest_component_bbox(BinaryMask(8, 8, bits)) == BoundingBox(5, 3, 1, 1)


def test_bbox_full_mask():
    bits = np.ones((4, 6), dtype=bool)
    assert largest_component_bbox(BinaryMask(6, 4, bits)) == BoundingBox(0, 0, 6, 4)


def test_bbox_largest_of_two_components():
    bits = np.zeros((8, 8), dtype=bool)
    bits[1, 1:6] = True          # 5 pixels
    bits[5, 2:5] = True          # 3 pixels
    box = largest_component_bbox(BinaryMask(8, 8, bits))
    assert box == _bbox_oracle(bits) == BoundingBox(1, 1, 5, 1)


def test_bbox_empty_mask():
    with pytest.raises(imaging.EmptyMaskError):
        largest_component_bbox(BinaryMask(4, 4, np.zeros((4, 4), dtype=bool)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**63 - 1))
def test_bbox_matches_flood_fill_oracle(seed):
    rng = np.random.default_rng(seed)
    bits = rng.random((9, 9)) < 0.35
    if not bits.any():
        bits[0, 0] = True
    assert largest_component_bbox(BinaryMask(9, 9, bits)) == _bbox_oracle(bits)


def test_crop_identity_and_single_pixel():
    img = gray_image(range(16), 4, 4)
    assert crop(img, BoundingBox(0, 0, 4, 4)) == img
    assert crop(img, BoundingBox(0, 0, 1, 1)).pixels == bytes([0])


def test_crop_interior_box():
    img = gray_image(range(16), 4, 4)
    assert crop(img, BoundingBox(1, 1, 2, 2)).pixels == bytes([5, 6, 9, 10])


def test_crop_out_of_bounds():
    with pytest.raises(imaging.BoxOutOfBoundsError):
        crop(gray_image(range(16), 4, 4), BoundingBox(2, 2, 3, 3))


def test_crop_of_component_bbox_matches_extents():
    bits = np.zeros((6, 6), dtype=bool)
    bits[2:5, 1:3] = True
    box = largest_component_bbox(BinaryMask(6, 6, bits))
    img = gray_image(range(36), 6, 6)
    cropped = crop(img, box)
    assert (cropped.width, cropped.height) == (2, 3)


# --- resize ------------------------------------------------------------------


def _resize_oracle_1d(samples, out_n):
    """Direct per-pixel evaluation of the half-pixel-center map."""
    in_n = len(samples)
    out = []
    for d in range(out_n):
        src = (d + 0.5) * in_n / out_n - 0.5
        src = min(max(src, 0.0), in_n - 1.0)
        i0 = int(np.floor(src))
        i1 = min(i0 + 1, in_n - 1)
        f = src - i0
        out.append(int(np.floor(samples[i0] * (1 - f) + samples[i1] * f + 0.5)))
    return out


def test_resize_constant_image():
    img = gray_image([77] * 6, 3, 2)
    out = resize_bilinear(img, 5, 4)
    assert set(out.pixels) == {77}


def test_resize_identity():
    img = gray_image(range(12), 4, 3)
    assert resize_bilinear(img, 4, 3) == img


def test_resize_2x1_to_4x1():
    img = gray_image([0, 255], 2, 1)
    out = resize_bilinear(img, 4, 1)
    assert list(out.pixels) == [0, 64, 191, 255] == _resize_oracle_1d([0, 255], 4)


def test_resize_bounds_within_rounding():
    rng = np.random.default_rng(3)
    img = RasterImage.from_array(rng.integers(40, 200, (6, 9), dtype=np.uint8))
    for w, h in ((3, 2), (13, 11), (9, 6)):
        out = np.frombuffer(resize_bilinear(img, w, h).pixels, dtype=np.uint8)
        src = np.frombuffer(img.pixels, dtype=np.uint8)
        assert out.min() >= src.min() - 1
        assert out.max() <= src.max() + 1


# --- preprocess --------------------------------------------------------------


def test_preprocess_gray32_is_direct_normalization():
    values = list(range(256)) * 4
    img = gray_image(values, 32, 32)
    out = preprocess(img)
    assert out.shape == (32, 32)
    np.testing.assert_allclose(out, np.array(values).reshape(32, 32) / 255.0)


def test_preprocess_blue_frame_falls_back_to_full_frame():
    out = preprocess(rgb_constant(0, 0, 255, 64, 64))
    np.testing.assert_allclose(out, np.full((32, 32), 29 / 255))


def test_preprocess_crops_red_patch_from_blue_frame():
    arr = np.zeros((64, 64, 3), dtype=np.uint8)
    arr[:, :, 2] = 255
    arr[20:36, 30:46] = (255, 0, 0)
    out = preprocess(RasterImage.from_array(arr))
    np.testing.assert_allclose(out, np.full((32, 32), 76 / 255))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(1, 40), st.integers(1, 40),
       st.sampled_from([1, 3]))
def test_preprocess_always_yields_valid_gray32(seed, w, h, channels):
    rng = np.random.default_rng(seed)
    img = RasterImage.from_array(rng.integers(0, 256, (h, w, channels), dtype=np.uint8))
    out = preprocess(img)
    imaging.validate_gray32(out)
