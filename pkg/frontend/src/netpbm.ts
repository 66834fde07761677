/** Minimal binary netpbm codec.
 *
 * The service accepts only P5/P6 streams, so camera frames and decoded
 * uploads are re-encoded here; PGM/PPM uploads are also decoded locally to
 * paint the preview.
 */

export interface PnmImage {
  width: number;
  height: number;
  channels: 1 | 3;
  pixels: Uint8Array; // row-major, interleaved
}

export function encodeP6(width: number, height: number, rgb: Uint8Array): Uint8Array {
  if (rgb.length !== width * height * 3) {
    throw new Error(`pixel buffer is ${rgb.length} bytes, expected ${width * height * 3}`);
  }
  const header = new TextEncoder().encode(`P6 ${width} ${height} 255\n`);
  const out = new Uint8Array(header.length + rgb.length);
  out.set(header, 0);
  out.set(rgb, header.length);
  return out;
}

export function decodePnm(data: Uint8Array): PnmImage {
  const magic = String.fromCharCode(data[0] ?? 0, data[1] ?? 0);
  let channels: 1 | 3;
  if (magic === "P5") channels = 1;
  else if (magic === "P6") channels = 3;
  else throw new Error(`not a binary netpbm stream (magic ${JSON.stringify(magic)})`);

  const isSpace = (b: number) => b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3) {
    while (pos < data.length && isSpace(data[pos])) pos++;
    if (data[pos] === 0x23) {
      // '#' comment runs to end of line
      while (pos < data.length && data[pos] !== 0x0a && data[pos] !== 0x0d) pos++;
      continue;
    }
    let token = "";
    while (pos < data.length && !isSpace(data[pos])) token += String.fromCharCode(data[pos++]);
    if (!/^\d+$/.test(token)) throw new Error(`bad header field ${JSON.stringify(token)}`);
    fields.push(parseInt(token, 10));
  }
  if (pos >= data.length || !isSpace(data[pos])) throw new Error("missing raster separator");
  pos++;

  const [width, height, maxval] = fields;
  if (maxval !== 255) throw new Error(`unsupported maxval ${maxval}`);
  const need = width * height * channels;
  const pixels = data.slice(pos, pos + need);
  if (pixels.length < need) throw new Error(`raster truncated: ${pixels.length}/${need} bytes`);
  return { width, height, channels, pixels };
}

/** Expand to RGBA for a canvas ImageData buffer. */
export function toRgba(img: PnmImage): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(new ArrayBuffer(img.width * img.height * 4));
  for (let i = 0; i < img.width * img.height; i++) {
    const r = img.pixels[i * img.channels];
    const g = img.channels === 3 ? img.pixels[i * 3 + 1] : r;
    const b = img.channels === 3 ? img.pixels[i * 3 + 2] : r;
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = 255;
  }
  return out;
}
