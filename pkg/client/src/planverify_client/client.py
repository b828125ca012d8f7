"""Synchronous client for the planverify scoring service.

The service is stateless and deterministic, so retrying a request is always
safe; the client therefore retries connection-level failures with exponential
backoff but never retries HTTP error statuses — a 4xx means the request body
is wrong and will stay wrong.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import httpx

ENV_BASE_URL = "PLANVERIFY_URL"
DEFAULT_BASE_URL = "http://127.0.0.1:8080"


class ClientError(Exception):
    """Base class for all client-raised errors."""


class BadRequest(ClientError):
    """The service rejected the request envelope (HTTP 400)."""


class SpecInvalid(ClientError):
    """The design specification failed server-side validation (HTTP 422)."""


class TooManyCandidates(ClientError):
    """The candidate list exceeds the server's cap (HTTP 413)."""


class Transport(ClientError):
    """Connection-level failure after exhausting retries."""


@dataclass(frozen=True)
class ClientConfig:
    base_url: str | None = None
    timeout: float = 30.0
    max_attempts: int = 3
    backoff_base: float = 0.25  # seconds; doubles per retry

    def resolved_base_url(self) -> str:
        return (
            self.base_url
            or os.environ.get(ENV_BASE_URL)
            or DEFAULT_BASE_URL
        ).rstrip("/")


class Client:
    """Thread-safe facade over one httpx connection pool."""

    def __init__(self, config: ClientConfig | None = None):
        self._config = config or ClientConfig()
        self._http = httpx.Client(
            base_url=self._config.resolved_base_url(),
            timeout=self._config.timeout,
        )

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "Client":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- transport ---------------------------------------------------------

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        last_exc: Exception | None = None
        for attempt in range(self._config.max_attempts):
            try:
                response = self._http.request(method, path, json=payload)
            except httpx.TransportError as exc:
                last_exc = exc
                if attempt + 1 < self._config.max_attempts:
                    time.sleep(self._config.backoff_base * (2**attempt))
                continue
            return self._decode(response)
        raise Transport(f"{method} {path} failed after "
                        f"{self._config.max_attempts} attempts: {last_exc}")

    @staticmethod
    def _decode(response: httpx.Response) -> dict:
        if response.status_code == 400:
            raise BadRequest(Client._error_message(response))
        if response.status_code == 413:
            raise TooManyCandidates(Client._error_message(response))
        if response.status_code == 422:
            raise SpecInvalid(Client._error_message(response))
        if response.status_code >= 400:
            raise ClientError(
                f"unexpected status {response.status_code}: {response.text[:200]}"
            )
        return response.json()

    @staticmethod
    def _error_message(response: httpx.Response) -> str:
        try:
            return str(response.json().get("error", response.text))
        except ValueError:
            return response.text

    # -- API surface -------------------------------------------------------

    def health(self) -> dict:
        return self._request("GET", "/healthz")

    def verify(self, spec, plan, config: dict | None = None) -> dict:
        body: dict = {"spec": spec, "plan": plan}
        if config:
            body["config"] = config
        return self._request("POST", "/v1/verify", body)["result"]

    def reward_group(
        self, spec, candidates: list, epsilon: float | None = None
    ) -> dict:
        body: dict = {"spec": spec, "candidates": candidates, "group": True}
        if epsilon is not None:
            body["config"] = {"epsilon": epsilon}
        return self._request("POST", "/v1/reward", body)["result"]

    def select(self, spec, candidates: list, config: dict | None = None) -> dict:
        body: dict = {"spec": spec, "candidates": candidates}
        if config:
            body["config"] = config
        return self._request("POST", "/v1/select", body)["result"]
