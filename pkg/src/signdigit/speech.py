"""Digit to Bangla text and speech.

The recognized digit becomes an English word, is translated to Bangla, and
is synthesized to audio.  Hosted translate/TTS services are modeled as HTTP
backends behind small contracts; a builtin lexicon and a deterministic tone
synthesizer keep the whole pipeline runnable offline.

HTTP wire format (adapters for real providers would live outside this
module): the translator takes JSON {"text", "source_lang", "target_lang"}
and answers JSON {"text"}; the TTS takes JSON {"text", "lang"} and answers
WAV bytes.
"""

from __future__ import annotations

import json
import math
import struct
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np

SAMPLE_RATE = 16000
TONE_SECONDS = 0.5
TONE_BASE_HZ = 440.0
TONE_AMPLITUDE = 16384  # half of int16 full scale

# digit -> (english word, Bangla word)
LEXICON: tuple[tuple[str, str], ...] = (
    ("zero", "শূন্য"),          # শূন্য
    ("one", "এক"),                              # এক
    ("two", "দুই"),                        # দুই
    ("three", "তিন"),                      # তিন
    ("four", "চার"),                       # চার
    ("five", "পাঁচ"),                 # পাঁচ
    ("six", "ছয়"),                        # ছয়
    ("seven", "সাত"),                      # সাত
    ("eight", "আট"),                            # আট
    ("nine", "নয়"),                       # নয়
)

_ENGLISH_TO_BANGLA = {en: bn for en, bn in LEXICON}
_ENGLISH_TO_DIGIT = {en: d for d, (en, _) in enumerate(LEXICON)}


class DigitRangeError(ValueError):
    pass


class UnknownWordError(ValueError):
    pass


class BackendUnreachableError(RuntimeError):
    pass


class UndecodableAudioError(ValueError):
    pass


class MissingDigitHintError(ValueError):
    pass


@dataclass(frozen=True)
class AudioClip:
    sample_rate: int
    samples: np.ndarray  # int16 mono

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if self.samples.dtype != np.int16 or self.samples.ndim != 1 or len(self.samples) == 0:
            raise ValueError("samples must be a non-empty 1-D int16 array")


@dataclass(frozen=True)
class BuiltinTranslator:
    """Digit-word lexicon; covers exactly the ten digit words."""

    def translate(self, text: str) -> str:
        word = text.strip().lower()
        if word not in _ENGLISH_TO_BANGLA:
            raise UnknownWordError(f"builtin translator only knows digit words, got {text!r}")
        return _ENGLISH_TO_BANGLA[word]


@dataclass(frozen=True)
class HttpTranslator:
    endpoint: str
    source_lang: str = "en"
    target_lang: str = "bn"
    timeout: float = 5.0

    def translate(self, text: str) -> str:
        body = json.dumps(
            {"text": text, "source_lang": self.source_lang, "target_lang": self.target_lang}
        ).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise BackendUnreachableError(f"translator at {self.endpoint}: {exc}") from exc
        if "text" not in payload:
            raise BackendUnreachableError(f"translator at {self.endpoint}: malformed response")
        return payload["text"]


@dataclass(frozen=True)
class OfflineToneTts:
    """Deterministic per-digit sine tone; the always-available fallback."""

    def synthesize(self, text: str, digit_hint: int | None = None) -> AudioClip:
        if digit_hint is None:
            raise MissingDigitHintError("offline tone synthesis needs the digit")
        return tone_for_digit(digit_hint)


@dataclass(frozen=True)
class HttpTts:
    endpoint: str
    lang: str = "bn"
    timeout: float = 5.0

    def synthesize(self, text: str, digit_hint: int | None = None) -> AudioClip:
        body = json.dumps({"text": text, "lang": self.lang}).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                audio = resp.read()
        except (urllib.error.URLError, OSError) as exc:
            raise BackendUnreachableError(f"tts at {self.endpoint}: {exc}") from exc
        return wav_decode(audio)


def digit_to_english(d: int) -> str:
    if not isinstance(d, (int, np.integer)) or not 0 <= d <= 9:
        raise DigitRangeError(f"digit must be 0..9, got {d!r}")
    return LEXICON[d][0]


def digit_frequency(d: int) -> float:
    """Equal-tempered tone per digit: 440 * 2^(d/12) Hz."""
    return TONE_BASE_HZ * 2.0 ** (d / 12.0)


def tone_for_digit(d: int) -> AudioClip:
    if not 0 <= d <= 9:
        raise DigitRangeError(f"digit must be 0..9, got {d!r}")
    n = int(SAMPLE_RATE * TONE_SECONDS)
    t = np.arange(n) / SAMPLE_RATE
    wave = TONE_AMPLITUDE * np.sin(2.0 * math.pi * digit_frequency(d) * t)
    return AudioClip(SAMPLE_RATE, np.floor(wave + 0.5).astype(np.int16))


def translate(text: str, backend) -> str:
    """Translate via the backend; external failures fall back to the builtin
    lexicon when the text is a digit word, otherwise propagate."""
    if isinstance(backend, BuiltinTranslator):
        return backend.translate(text)
    try:
        return backend.translate(text)
    except BackendUnreachableError:
        word = text.strip().lower()
        if word in _ENGLISH_TO_BANGLA:
            return _ENGLISH_TO_BANGLA[word]
        raise


def synthesize(text: str, digit_hint: int | None, backend) -> AudioClip:
    """Synthesize via the backend; external failures fall back to the offline
    tone when a digit hint is available, otherwise propagate."""
    if isinstance(backend, OfflineToneTts):
        return backend.synthesize(text, digit_hint)
    try:
        return backend.synthesize(text, digit_hint)
    except BackendUnreachableError:
        if digit_hint is not None:
            return tone_for_digit(digit_hint)
        raise


def speak_digit(
    d: int,
    translator=BuiltinTranslator(),
    tts=OfflineToneTts(),
) -> tuple[str, AudioClip]:
    """digit -> english -> Bangla text -> audio; validates before any backend call."""
    english = digit_to_english(d)
    bangla = translate(english, translator)
    clip = synthesize(bangla, d, tts)
    return bangla, clip


def wav_encode(clip: AudioClip) -> bytes:
    """Canonical 44-byte RIFF/WAVE header + little-endian PCM16 mono payload."""
    payload = clip.samples.astype("<i2").tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        1,  # PCM
        1,  # mono
        clip.sample_rate,
        clip.sample_rate * 2,  # byte rate
        2,  # block align
        16,  # bits per sample
        b"data",
        len(payload),
    )
    return header + payload


def wav_decode(data: bytes) -> AudioClip:
    """Parse the canonical mono PCM16 layout produced by wav_encode."""
    if len(data) < 44 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise UndecodableAudioError("not a RIFF/WAVE stream")
    fmt = struct.unpack("<HHIIHH", data[20:36])
    audio_format, channels, rate, _, _, bits = fmt
    if audio_format != 1 or channels != 1 or bits != 16:
        raise UndecodableAudioError("only mono 16-bit PCM is supported")
    if data[36:40] != b"data":
        raise UndecodableAudioError("missing data chunk")
    (size,) = struct.unpack("<I", data[40:44])
    payload = data[44 : 44 + size]
    if len(payload) < size or size % 2:
        raise UndecodableAudioError("data chunk truncated")
    return AudioClip(rate, np.frombuffer(payload, dtype="<i2").copy())
