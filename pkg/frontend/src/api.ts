/** Typed client for the service's /api endpoints.
 *
 * The transport is injectable so tests can run against a canned service;
 * the browser passes fetch.
 */

import { ClassifyResponse, argmax } from "./types.js";

export interface TransportResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  arrayBuffer(): Promise<ArrayBuffer>;
}

export type Transport = (url: string, init: RequestInitLike) => Promise<TransportResponse>;

export interface RequestInitLike {
  method: string;
  body?: BodyInitLike;
  headers?: Record<string, string>;
}

export type BodyInitLike = FormData | Uint8Array | string;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function errorMessage(resp: TransportResponse): Promise<string> {
  try {
    const body = (await resp.json()) as { error?: string };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `service responded with status ${resp.status}`;
}

export class ApiClient {
  constructor(private transport: Transport, private base = "") {}

  async health(): Promise<boolean> {
    try {
      const resp = await this.transport(`${this.base}/api/health`, { method: "GET" });
      return resp.ok;
    } catch {
      return false;
    }
  }

  async classify(image: Uint8Array, name: string): Promise<ClassifyResponse> {
    const form = new FormData();
    form.append("image", new Blob([image.buffer as ArrayBuffer]), name);
    const resp = await this.transport(`${this.base}/api/classify`, {
      method: "POST",
      body: form,
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    const body = (await resp.json()) as ClassifyResponse;
    if (
      typeof body.digit !== "number" ||
      !Array.isArray(body.probabilities) ||
      body.probabilities.length !== 10 ||
      body.digit !== argmax(body.probabilities)
    ) {
      throw new ApiError(resp.status, "malformed classify response");
    }
    return body;
  }

  async speak(digit: number): Promise<ArrayBuffer> {
    const resp = await this.transport(`${this.base}/api/speak`, {
      method: "POST",
      body: JSON.stringify({ digit }),
      headers: { "Content-Type": "application/json" },
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    return resp.arrayBuffer();
  }
}
