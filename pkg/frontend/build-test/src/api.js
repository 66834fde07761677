"use strict";
/** Typed client for the service's /api endpoints.
 *
 * The transport is injectable so tests can run against a canned service;
 * the browser passes fetch.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.ApiClient = exports.ApiError = void 0;
const types_js_1 = require("./types.js");
class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
exports.ApiError = ApiError;
async function errorMessage(resp) {
    try {
        const body = (await resp.json());
        if (body && typeof body.error === "string")
            return body.error;
    }
    catch {
        // non-JSON error body; fall through to the generic message
    }
    return `service responded with status ${resp.status}`;
}
class ApiClient {
    constructor(transport, base = "") {
        this.transport = transport;
        this.base = base;
    }
    async health() {
        try {
            const resp = await this.transport(`${this.base}/api/health`, { method: "GET" });
            return resp.ok;
        }
        catch {
            return false;
        }
    }
    async classify(image, name) {
        const form = new FormData();
        form.append("image", new Blob([image.buffer]), name);
        const resp = await this.transport(`${this.base}/api/classify`, {
            method: "POST",
            body: form,
        });
        if (!resp.ok)
            throw new ApiError(resp.status, await errorMessage(resp));
        const body = (await resp.json());
        if (typeof body.digit !== "number" ||
            !Array.isArray(body.probabilities) ||
            body.probabilities.length !== 10 ||
            body.digit !== (0, types_js_1.argmax)(body.probabilities)) {
            throw new ApiError(resp.status, "malformed classify response");
        }
        return body;
    }
    async speak(digit) {
        const resp = await this.transport(`${this.base}/api/speak`, {
            method: "POST",
            body: JSON.stringify({ digit }),
            headers: { "Content-Type": "application/json" },
        });
        if (!resp.ok)
            throw new ApiError(resp.status, await errorMessage(resp));
        return resp.arrayBuffer();
    }
}
exports.ApiClient = ApiClient;
