"use strict";
/** Browser adapter: materializes the view tree, wires actions, and turns
 * files / camera frames into staged netpbm images. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.materialize = materialize;
exports.stageFile = stageFile;
exports.captureFromCamera = captureFromCamera;
exports.browserAudioFactory = browserAudioFactory;
exports.handleAction = handleAction;
const netpbm_js_1 = require("./netpbm.js");
function materialize(node, onAction) {
    const el = document.createElement(node.tag);
    for (const [key, value] of Object.entries(node.attrs)) {
        el.setAttribute(key, value);
    }
    if (node.on) {
        for (const [event, action] of Object.entries(node.on)) {
            el.addEventListener(event, (e) => onAction(action, e));
        }
    }
    for (const child of node.children) {
        el.append(typeof child === "string" ? document.createTextNode(child) : materialize(child, onAction));
    }
    return el;
}
function pnmPreviewUrl(bytes) {
    const img = (0, netpbm_js_1.decodePnm)(bytes);
    const canvas = document.createElement("canvas");
    canvas.width = img.width;
    canvas.height = img.height;
    const ctx = canvas.getContext("2d");
    ctx.putImageData(new ImageData((0, netpbm_js_1.toRgba)(img), img.width, img.height), 0, 0);
    return canvas.toDataURL("image/png");
}
function canvasToStaged(canvas, name) {
    const ctx = canvas.getContext("2d");
    const data = ctx.getImageData(0, 0, canvas.width, canvas.height).data;
    const rgb = new Uint8Array(canvas.width * canvas.height * 3);
    for (let i = 0; i < canvas.width * canvas.height; i++) {
        rgb[i * 3] = data[i * 4];
        rgb[i * 3 + 1] = data[i * 4 + 1];
        rgb[i * 3 + 2] = data[i * 4 + 2];
    }
    return {
        bytes: (0, netpbm_js_1.encodeP6)(canvas.width, canvas.height, rgb),
        previewUrl: canvas.toDataURL("image/png"),
        name,
    };
}
async function stageFile(file) {
    const bytes = new Uint8Array(await file.arrayBuffer());
    if (file.name.endsWith(".pgm") || file.name.endsWith(".ppm")) {
        return { bytes, previewUrl: pnmPreviewUrl(bytes), name: file.name };
    }
    // browser-decodable formats are rasterized and re-encoded as P6
    const url = URL.createObjectURL(file);
    try {
        const img = await loadImage(url);
        const canvas = document.createElement("canvas");
        canvas.width = img.naturalWidth;
        canvas.height = img.naturalHeight;
        canvas.getContext("2d").drawImage(img, 0, 0);
        return canvasToStaged(canvas, file.name);
    }
    finally {
        URL.revokeObjectURL(url);
    }
}
function loadImage(url) {
    return new Promise((resolve, reject) => {
        const img = new Image();
        img.onload = () => resolve(img);
        img.onerror = () => reject(new Error("could not decode the selected file"));
        img.src = url;
    });
}
async function captureFromCamera() {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    try {
        const video = document.createElement("video");
        video.srcObject = stream;
        await video.play();
        const canvas = document.createElement("canvas");
        canvas.width = video.videoWidth;
        canvas.height = video.videoHeight;
        canvas.getContext("2d").drawImage(video, 0, 0);
        return canvasToStaged(canvas, "camera.ppm");
    }
    finally {
        stream.getTracks().forEach((t) => t.stop());
    }
}
function browserAudioFactory(bytes) {
    const url = URL.createObjectURL(new Blob([bytes], { type: "audio/wav" }));
    const element = new Audio(url);
    return {
        url,
        handle: {
            play: () => void element.play().catch(() => undefined),
            stop: () => {
                element.pause();
                element.currentTime = 0;
            },
        },
    };
}
async function handleAction(ctrl, action, event) {
    switch (action) {
        case "file-selected": {
            const input = event.target;
            const file = input.files?.[0];
            if (!file)
                return;
            try {
                ctrl.stage(await stageFile(file));
            }
            catch (err) {
                ctrl.stageFailed(`could not read ${file.name}: ${err}`);
            }
            input.value = "";
            break;
        }
        case "capture":
            try {
                ctrl.stage(await captureFromCamera());
            }
            catch (err) {
                ctrl.stageFailed(`camera unavailable: ${err}`);
            }
            break;
        case "submit":
            void ctrl.submit();
            break;
        case "retry":
            ctrl.retry();
            break;
        case "toggle-mute":
            ctrl.toggleMute();
            break;
    }
}
