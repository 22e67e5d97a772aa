"""Line-oriented availability scenarios: nodes, events, expected outcomes.

Grammar (one command per line, ``#`` comments allowed)::

    node <id> origin|gateway|pinner [ttl=<seconds>]
    add <node> <alias> <payload-token>       # store payload bytes, pin locally
    pin <node> <alias>
    offline <node> | online <node>
    tick <seconds>                           # advance the simulated clock
    gc <node>|all
    fetch <via-gateway> <alias> expect ok|notfound|offline
    retrieve <alias> expect ok|notfound      # direct provider read
    daemon <via-gateway> <alias> period=<seconds>
    run <seconds>                            # advance clock, firing daemons + gc
    sync <pinner> <alias>                    # retrieve + pin at the pinner

Every ``expect`` is checked as the scenario runs; a mismatch fails with the
offending line number.
"""

from __future__ import annotations

from pathlib import Path

from .content import ContentId
from .network import Network, RefreshDaemon, SimClock, run_simulation
from .node import CastoreError, NodeKind, NotFound, StoreNode


class ScenarioError(Exception):
    pass


class ScenarioFailure(AssertionError):
    def __init__(self, line_no: int, line: str, message: str):
        super().__init__(f"line {line_no}: {line!r}: {message}")
        self.line_no = line_no


class ScenarioRunner:
    def __init__(self) -> None:
        self.network = Network(SimClock())
        self.aliases: dict[str, ContentId] = {}
        self.daemons: list[RefreshDaemon] = []
        self.checks: list[tuple[int, str, str]] = []  # (line, kind, outcome)

    def run_text(self, text: str) -> "ScenarioRunner":
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                self._step(line_no, line)
            except ScenarioFailure:
                raise
            except CastoreError as exc:
                raise ScenarioFailure(line_no, line, f"unexpected error: {exc}")
        return self

    def run_file(self, path: str | Path) -> "ScenarioRunner":
        return self.run_text(Path(path).read_text())

    # -- command handlers ----------------------------------------------------

    def _step(self, line_no: int, line: str) -> None:
        parts = line.split()
        command, args = parts[0], parts[1:]
        handler = getattr(self, f"_cmd_{command}", None)
        if handler is None:
            raise ScenarioError(f"line {line_no}: unknown command {command!r}")
        handler(line_no, line, args)

    def _cmd_node(self, line_no, line, args) -> None:
        node_id, kind = args[0], NodeKind(args[1])
        ttl = None
        for extra in args[2:]:
            key, _, value = extra.partition("=")
            if key == "ttl":
                ttl = float(value)
        node = StoreNode(node_id, kind) if ttl is None else StoreNode(node_id, kind, ttl)
        self.network.add_node(node)

    def _cmd_add(self, line_no, line, args) -> None:
        node, alias, payload = self.network.node(args[0]), args[1], args[2]
        self.aliases[alias] = self.network.add(node, payload.encode("utf-8"))

    def _cmd_pin(self, line_no, line, args) -> None:
        node = self.network.node(args[0])
        cid = self.aliases[args[1]]
        data = self.network.retrieve(cid)
        node.put(cid, data, self.network.clock.now(), pin=True)

    def _cmd_offline(self, line_no, line, args) -> None:
        self.network.node(args[0]).online = False

    def _cmd_online(self, line_no, line, args) -> None:
        self.network.node(args[0]).online = True

    def _cmd_tick(self, line_no, line, args) -> None:
        self.network.clock.advance(float(args[0]))

    def _cmd_gc(self, line_no, line, args) -> None:
        if args[0] == "all":
            self.network.gc_all()
        else:
            self.network.node(args[0]).gc(self.network.clock.now())

    def _expectation(self, args) -> str:
        if len(args) < 2 or args[-2] != "expect":
            raise ScenarioError("fetch/retrieve need a trailing 'expect <outcome>'")
        return args[-1]

    def _cmd_fetch(self, line_no, line, args) -> None:
        expected = self._expectation(args)
        via = self.network.node(args[0])
        cid = self.aliases[args[1]]
        outcome = self._attempt(lambda: self.network.fetch(cid, via), cid)
        self._check(line_no, line, expected, outcome)

    def _cmd_retrieve(self, line_no, line, args) -> None:
        expected = self._expectation(args)
        cid = self.aliases[args[0]]
        outcome = self._attempt(lambda: self.network.retrieve(cid), cid)
        self._check(line_no, line, expected, outcome)

    def _attempt(self, fn, cid: ContentId) -> str:
        from .node import IntegrityMismatch, NodeOffline

        try:
            data = fn()
        except NotFound:
            return "notfound"
        except NodeOffline:
            return "offline"
        except IntegrityMismatch:
            return "corrupt"
        if not cid.verify(data):
            return "corrupt"
        return "ok"

    def _check(self, line_no: int, line: str, expected: str, outcome: str) -> None:
        self.checks.append((line_no, expected, outcome))
        if expected != outcome:
            raise ScenarioFailure(line_no, line, f"expected {expected}, got {outcome}")

    def _cmd_daemon(self, line_no, line, args) -> None:
        via = self.network.node(args[0])
        cid = self.aliases[args[1]]
        period = None
        for extra in args[2:]:
            key, _, value = extra.partition("=")
            if key == "period":
                period = float(value)
        if period is None:
            raise ScenarioError(f"line {line_no}: daemon needs period=<seconds>")
        daemon = RefreshDaemon(
            self.network, [cid], [via], period, next_due=self.network.clock.now()
        )
        self.daemons.append(daemon)

    def _cmd_run(self, line_no, line, args) -> None:
        until = self.network.clock.now() + float(args[0])
        run_simulation(self.network, self.daemons, until)

    def _cmd_sync(self, line_no, line, args) -> None:
        pinner = self.network.node(args[0])
        cid = self.aliases[args[1]]
        data = self.network.retrieve(cid)
        pinner.put(cid, data, self.network.clock.now(), pin=True)


def run_scenario_file(path: str | Path) -> ScenarioRunner:
    return ScenarioRunner().run_file(path)
