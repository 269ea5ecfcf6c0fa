"""LLM backend contract plus the two shipped implementations.

MockBackend replays canned (prompt-pattern -> reply) transcripts and falls
back to deterministic heuristics, so the whole pipeline runs offline and
byte-reproducibly. HttpBackend talks to a chat-completion style endpoint;
the bearer token comes from the LOGFIX_LLM_TOKEN environment variable, never
from config files or flags.
"""

from __future__ import annotations

import json
import os
import re
import threading
from typing import Protocol, runtime_checkable

import requests

TOKEN_ENV_VAR = "LOGFIX_LLM_TOKEN"


class BackendError(Exception):
    """Transport-level failure talking to a completion backend."""


@runtime_checkable
class LlmBackend(Protocol):
    name: str
    supports_temperature: bool

    def complete(self, prompt: str, max_output_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        ...


def load_transcript(path: str) -> list[tuple[str, str]]:
    """A transcript file is a JSON list of {"pattern": regex, "reply": text}."""
    with open(path, "r", encoding="utf-8") as fh:
        entries = json.load(fh)
    return [(e["pattern"], e["reply"]) for e in entries]


_TARGET_LINE_RE = re.compile(r"Target statement:\s*\n(.+)")


class MockBackend:
    """Deterministic stand-in for a real model.

    The first transcript pattern that matches the prompt wins. Unmatched
    prompts get heuristic replies: checker prompts are confirmed, updater
    prompts echo the target statement back between the sentinels. That keeps
    an unscripted pipeline run structurally complete; tests script the
    interesting behaviors.
    """

    name = "mock"
    supports_temperature = False

    def __init__(self, transcript: list[tuple[str, str]] | None = None):
        self.transcript = [(re.compile(p, re.DOTALL), r)
                           for p, r in (transcript or [])]
        self.calls: list[str] = []
        self._lock = threading.Lock()

    def complete(self, prompt: str, max_output_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        with self._lock:
            self.calls.append(prompt)
        for pattern, reply in self.transcript:
            if pattern.search(prompt):
                return reply
        if "<UPDATED>" in prompt:
            m = _TARGET_LINE_RE.search(prompt)
            line = m.group(1).strip() if m else ""
            return f"<UPDATED>{line}</UPDATED>"
        if "VERDICT" in prompt:
            return ("VERDICT: YES\n"
                    "RATIONALE: The statement does not match its context.\n"
                    "SEMANTICS: The statement should describe what the "
                    "surrounding code actually does at this point.")
        return "OK"


class HttpBackend:
    """Minimal chat-completion client (OpenAI-style request/response shape)."""

    supports_temperature = True

    def __init__(self, endpoint: str, model: str, timeout_seconds: float = 60.0,
                 name: str = "http"):
        self.endpoint = endpoint
        self.model = model
        self.timeout_seconds = timeout_seconds
        self.name = name

    def complete(self, prompt: str, max_output_tokens: int = 512,
                 temperature: float = 0.0) -> str:
        token = os.environ.get(TOKEN_ENV_VAR, "")
        if not token:
            raise BackendError(
                f"no API token: set the {TOKEN_ENV_VAR} environment variable")
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": max_output_tokens,
            "temperature": temperature,
        }
        try:
            resp = requests.post(
                self.endpoint,
                json=payload,
                headers={"Authorization": f"Bearer {token}"},
                timeout=self.timeout_seconds,
            )
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except requests.RequestException as exc:
            raise BackendError(f"backend request failed: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise BackendError(f"malformed backend response: {exc}") from exc
