import assert from "node:assert/strict";
import { test } from "node:test";

import { decodePnm, encodeP6, toRgba } from "../src/netpbm.js";

test("encodeP6 produces a canonical header", () => {
  const bytes = encodeP6(2, 1, new Uint8Array([255, 0, 0, 0, 255, 0]));
  const header = new TextDecoder().decode(bytes.slice(0, 11));
  assert.equal(header, "P6 2 1 255\n");
  assert.equal(bytes.length, 11 + 6);
});

test("decodePnm round-trips encodeP6 output", () => {
  const rgb = new Uint8Array([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
  const img = decodePnm(encodeP6(2, 2, rgb));
  assert.equal(img.width, 2);
  assert.equal(img.height, 2);
  assert.equal(img.channels, 3);
  assert.deepEqual(Array.from(img.pixels), Array.from(rgb));
});

test("decodePnm reads P5 grayscale with comments", () => {
  const stream = new TextEncoder().encode("P5\n# camera frame\n2 2\n255\n");
  const data = new Uint8Array([...stream, 0, 64, 128, 255]);
  const img = decodePnm(data);
  assert.equal(img.channels, 1);
  assert.deepEqual(Array.from(img.pixels), [0, 64, 128, 255]);
});

test("decodePnm rejects truncated and foreign streams", () => {
  assert.throws(() => decodePnm(new TextEncoder().encode("P6 2 2 255\n")), /truncated/);
  assert.throws(() => decodePnm(new TextEncoder().encode("GIF89a")), /netpbm/);
  assert.throws(() => decodePnm(new TextEncoder().encode("P5 1 1 65535\n\x00\x00")), /maxval/);
});

test("toRgba expands grayscale to opaque gray pixels", () => {
  const img = { width: 2, height: 1, channels: 1 as const, pixels: new Uint8Array([10, 200]) };
  const rgba = toRgba(img);
  assert.deepEqual(Array.from(rgba), [10, 10, 10, 255, 200, 200, 200, 255]);
});
