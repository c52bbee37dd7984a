"""Line-delimited JSON client for an external statement/paraphrase plugin.

The plugin is a child process.  On start it prints ``{"protocol": "recast-plugin/1"}``;
afterwards each request line gets exactly one response line with the same id.
"""
from __future__ import annotations

import json
import logging
import queue
import random
import shlex
import subprocess
import threading
from collections import Counter
from dataclasses import dataclass, field

from .errors import PluginProtocolError
from .sqlmini import TemplateConverter
from .tables import Table

PROTOCOL = "recast-plugin/1"
MAX_PARAPHRASES = 5
DEFAULT_TIMEOUT = 10.0

log = logging.getLogger(__name__)
_EOF = object()


@dataclass
class PluginRequest:
    id: int
    kind: str
    question: str | None = None
    answer: str | None = None
    text: str | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class PluginResponse:
    id: int
    statement: str | None = None
    paraphrases: list[str] = field(default_factory=list)


class PluginClient:
    """Serialized, single-in-flight request pipe with template fallbacks."""

    name = "plugin"

    def __init__(self, command: str | list[str], timeout: float = DEFAULT_TIMEOUT, seed: int = 0):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self.seed = seed
        self.fallback = TemplateConverter()
        self.diag: Counter = Counter()
        self._lock = threading.Lock()
        self._next_id = 0
        self._abandoned: set[int] = set()
        self._dead = False
        self._lines: queue.Queue = queue.Queue()
        try:
            self._proc = subprocess.Popen(
                self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                text=True, encoding="utf-8", bufsize=1,
            )
        except OSError as exc:
            raise PluginProtocolError(f"cannot start plugin {self.command!r}: {exc}") from exc
        threading.Thread(target=self._pump, daemon=True).start()
        self._handshake()

    def _pump(self):
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(_EOF)

    def _handshake(self):
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            self.close()
            raise PluginProtocolError("plugin sent no handshake") from None
        try:
            hello = json.loads(line) if line is not _EOF else None
        except json.JSONDecodeError:
            hello = None
        if not isinstance(hello, dict) or hello.get("protocol") != PROTOCOL:
            self.close()
            raise PluginProtocolError(f"bad plugin handshake: {line!r}")

    def close(self):
        self._dead = True
        proc = self._proc
        if proc.poll() is None:
            try:
                proc.stdin.close()
                proc.wait(timeout=2)
            except (OSError, subprocess.TimeoutExpired):
                proc.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- transport ------------------------------------------------------------

    def call(self, req: PluginRequest) -> PluginResponse | None:
        """Send one request and wait for its response; ``None`` means use the fallback."""
        with self._lock:
            if self._dead:
                self.diag["plugin_unavailable"] += 1
                return None
            try:
                self._proc.stdin.write(json.dumps(req.to_json()) + "\n")
                self._proc.stdin.flush()
            except OSError:
                self._crashed()
                return None
            while True:
                try:
                    line = self._lines.get(timeout=self.timeout)
                except queue.Empty:
                    self.diag["plugin_timeout"] += 1
                    self._abandoned.add(req.id)
                    return None
                if line is _EOF:
                    self._crashed()
                    return None
                try:
                    obj = json.loads(line)
                    rid = obj["id"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    self.diag["plugin_malformed_response"] += 1
                    return None
                if rid in self._abandoned:
                    self._abandoned.discard(rid)
                    continue
                if rid != req.id:
                    raise PluginProtocolError(f"response id {rid!r} does not match request {req.id}")
                paraphrases = obj.get("paraphrases") or []
                if not isinstance(paraphrases, list):
                    self.diag["plugin_malformed_response"] += 1
                    return None
                return PluginResponse(rid, obj.get("statement"), [str(p) for p in paraphrases])

    def _crashed(self):
        if not self._dead:
            log.warning("plugin exited; falling back to templates")
        self.diag["plugin_crashed"] += 1
        self._dead = True

    def _request(self, kind: str, **fields) -> PluginResponse | None:
        with self._lock:
            rid = self._next_id
            self._next_id += 1
        return self.call(PluginRequest(rid, kind, **fields))

    # -- converter interface ------------------------------------------------------

    def qa2d(self, question: str, answer: str, table: Table | None = None) -> str | None:
        resp = self._request("qa2d", question=question, answer=answer)
        if resp is None or not resp.statement:
            return self.fallback.qa2d(question, answer, table)
        return resp.statement

    def paraphrase(self, text: str) -> str:
        resp = self._request("paraphrase", text=text)
        if resp is None or not resp.paraphrases:
            return text
        choices = resp.paraphrases[:MAX_PARAPHRASES]
        # Seeded per text, so the pick does not depend on call order across workers.
        return random.Random(f"{self.seed}:{text}").choice(choices)
