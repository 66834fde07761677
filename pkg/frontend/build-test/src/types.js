"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.BANGLA_NUMERALS = void 0;
exports.argmax = argmax;
/** Bangla numeral glyphs, indexed by digit. */
exports.BANGLA_NUMERALS = ["০", "১", "২", "৩", "৪", "৫", "৬", "৭", "৮", "৯"];
function argmax(values) {
    let best = 0;
    for (let i = 1; i < values.length; i++) {
        if (values[i] > values[best])
            best = i;
    }
    return best;
}
