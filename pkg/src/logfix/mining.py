"""Mining log-centric changes (LCCs) from project history.

A log-centric change is a commit whose every changed line falls inside a
recognized logging statement, with no statements added or removed: the
before/after statements match one-to-one by (method qualified name, method
occurrence, statement ordinal). Each differing matched pair becomes one
LogCentricChange carrying the after-version method context.

Two history providers feed the extractor: a git adapter that shells out to
the git CLI, and a fixture provider reading a directory layout of full
snapshots (history/<seq>_<commitid>/<files...>), which is what tests use.
"""

from __future__ import annotations

import difflib
import logging
import os
import subprocess
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterable, Protocol

from logfix.model import LogCentricChange, MethodContext
from logfix.parser import ParserConfig, extract_file

log = logging.getLogger(__name__)

SOURCE_SUFFIXES = (".java",)


# ---------------------------------------------------------------------------
# Repository selection
# ---------------------------------------------------------------------------

class RepoInitiator(Enum):
    COMPANY = "COMPANY"
    PERSONAL = "PERSONAL"


@dataclass(frozen=True)
class RepoMetadata:
    name: str
    stars: int
    commit_count: int
    created_at: date
    last_commit_at: date
    is_fork: bool
    initiator: RepoInitiator
    issues_enabled: bool
    has_license: bool


TARGET_MIN_COMMITS = 1_000
TARGET_MAX_COMMITS = 100_000
TARGET_MIN_STARS = 1_000          # strictly greater than
TARGET_CREATED_BY = date(2019, 12, 31)
TARGET_ACTIVE_SINCE = date(2023, 1, 1)


def is_target_repository(repo: RepoMetadata) -> bool:
    return (
        TARGET_MIN_COMMITS <= repo.commit_count <= TARGET_MAX_COMMITS
        and repo.stars > TARGET_MIN_STARS
        and repo.created_at <= TARGET_CREATED_BY
        and repo.last_commit_at >= TARGET_ACTIVE_SINCE
        and not repo.is_fork
    )


def filter_target_repositories(repos: Iterable[RepoMetadata]) -> list[RepoMetadata]:
    """Established, active, popular, non-fork repositories worth mining."""
    return [r for r in repos if is_target_repository(r)]


def is_well_maintained(repo: RepoMetadata) -> bool:
    """Company-initiated with an issue tracker and a license.

    Logging statements from these repositories are trusted as clean
    (NON_DEFECT) corpus material.
    """
    return (repo.initiator is RepoInitiator.COMPANY
            and repo.issues_enabled and repo.has_license)


def filter_well_maintained(repos: Iterable[RepoMetadata]) -> list[RepoMetadata]:
    return [r for r in repos if is_well_maintained(r)]


# ---------------------------------------------------------------------------
# Line diffing
# ---------------------------------------------------------------------------

class ChangeKind(Enum):
    ADD = "ADD"
    DELETE = "DELETE"
    MODIFY = "MODIFY"


LineEdit = tuple[ChangeKind, int | None, int | None]


def diff_lines(before: str, after: str) -> list[LineEdit]:
    """Minimal line edit script as (kind, before_line, after_line), 1-based.

    Replace blocks align pairwise into MODIFY edits (a delete adjacent to an
    add at the aligned position coalesces); surplus lines on either side
    degrade to DELETE/ADD.
    """
    b_lines = before.splitlines()
    a_lines = after.splitlines()
    sm = difflib.SequenceMatcher(None, b_lines, a_lines, autojunk=False)
    edits: list[LineEdit] = []
    for tag, i1, i2, j1, j2 in sm.get_opcodes():
        if tag == "equal":
            continue
        if tag == "replace":
            paired = min(i2 - i1, j2 - j1)
            for k in range(paired):
                edits.append((ChangeKind.MODIFY, i1 + k + 1, j1 + k + 1))
            for k in range(paired, i2 - i1):
                edits.append((ChangeKind.DELETE, i1 + k + 1, None))
            for k in range(paired, j2 - j1):
                edits.append((ChangeKind.ADD, None, j1 + k + 1))
        elif tag == "delete":
            for i in range(i1, i2):
                edits.append((ChangeKind.DELETE, i + 1, None))
        elif tag == "insert":
            for j in range(j1, j2):
                edits.append((ChangeKind.ADD, None, j + 1))
    return edits


# ---------------------------------------------------------------------------
# History providers
# ---------------------------------------------------------------------------

ChangedFile = tuple[str, str, str]  # path, before_text, after_text


@dataclass(frozen=True)
class CommitSnapshotPair:
    commit_id: str
    parent_id: str
    changed_files: tuple[ChangedFile, ...]


class HistoryProvider(Protocol):
    def commit_pairs(self) -> list[CommitSnapshotPair]:
        ...


class GitHistoryProvider:
    """Walks the first-parent chain of a local git repository via the git CLI."""

    def __init__(self, repo_path: str, since: str | None = None,
                 suffixes: tuple[str, ...] = SOURCE_SUFFIXES):
        self.repo_path = repo_path
        self.since = since
        self.suffixes = suffixes

    def _git(self, *args: str) -> str:
        proc = subprocess.run(
            ["git", "-C", self.repo_path, *args],
            capture_output=True, text=True, check=True)
        return proc.stdout

    def _show(self, commit: str, path: str) -> str:
        proc = subprocess.run(
            ["git", "-C", self.repo_path, "show", f"{commit}:{path}"],
            capture_output=True, text=True)
        return proc.stdout if proc.returncode == 0 else ""

    def commit_pairs(self) -> list[CommitSnapshotPair]:
        args = ["log", "--reverse", "--first-parent", "--pretty=%H"]
        if self.since:
            args.append(f"--since={self.since}")
        shas = self._git(*args).split()
        pairs: list[CommitSnapshotPair] = []
        for parent, child in zip(shas, shas[1:]):
            out = self._git("diff-tree", "-r", "--no-renames",
                            "--name-status", parent, child)
            files: list[ChangedFile] = []
            for line in out.splitlines():
                parts = line.split("\t")
                if len(parts) < 2:
                    continue
                status, path = parts[0], parts[-1]
                before = self._show(parent, path) if status != "A" else ""
                after = self._show(child, path) if status != "D" else ""
                files.append((path, before, after))
            pairs.append(CommitSnapshotPair(child, parent, tuple(files)))
        return pairs


class FixtureHistoryProvider:
    """Reads history/<seq>_<commitid>/<files...> snapshot directories.

    Each directory is a full tree; consecutive directories (sorted by name)
    form the commit pairs. The part after the first underscore is the commit
    id.
    """

    def __init__(self, history_dir: str,
                 suffixes: tuple[str, ...] = SOURCE_SUFFIXES):
        self.history_dir = history_dir
        self.suffixes = suffixes

    def _snapshot(self, dirname: str) -> dict[str, str]:
        root = os.path.join(self.history_dir, dirname)
        tree: dict[str, str] = {}
        for base, _, names in os.walk(root):
            for name in names:
                full = os.path.join(base, name)
                rel = os.path.relpath(full, root)
                with open(full, "r", encoding="utf-8") as fh:
                    tree[rel.replace(os.sep, "/")] = fh.read()
        return tree

    def commit_pairs(self) -> list[CommitSnapshotPair]:
        dirs = sorted(
            d for d in os.listdir(self.history_dir)
            if os.path.isdir(os.path.join(self.history_dir, d)) and "_" in d)
        pairs: list[CommitSnapshotPair] = []
        for prev, cur in zip(dirs, dirs[1:]):
            before_tree = self._snapshot(prev)
            after_tree = self._snapshot(cur)
            changed: list[ChangedFile] = []
            for path in sorted(set(before_tree) | set(after_tree)):
                b = before_tree.get(path, "")
                a = after_tree.get(path, "")
                if b != a:
                    changed.append((path, b, a))
            pairs.append(CommitSnapshotPair(
                commit_id=cur.split("_", 1)[1],
                parent_id=prev.split("_", 1)[1],
                changed_files=tuple(changed)))
        return pairs


# ---------------------------------------------------------------------------
# LCC extraction
# ---------------------------------------------------------------------------

def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _statement_index(records) -> dict[tuple[str, int, int], object]:
    """Key statements by (qualified_name, method occurrence, ordinal)."""
    seen: dict[str, int] = {}
    index: dict[tuple[str, int, int], object] = {}
    for ctx, parsed in records:
        occurrence = seen.get(ctx.qualified_name, 0)
        seen[ctx.qualified_name] = occurrence + 1
        for ordinal, ps in enumerate(parsed):
            index[(ctx.qualified_name, occurrence, ordinal)] = (ctx, ps.statement)
    return index


def _covered_lines(records) -> set[int]:
    lines: set[int] = set()
    for _, parsed in records:
        for ps in parsed:
            loc = ps.statement.location
            lines.update(range(loc.start_line, loc.end_line + 1))
    return lines


def extract_lccs(history: Iterable[CommitSnapshotPair],
                 parser_config: ParserConfig | None = None,
                 project_id: str = "") -> list[LogCentricChange]:
    """Filter commits down to pure logging-text modifications.

    A commit qualifies only if every changed line in every changed file lies
    within a recognized logging statement, statements match one-to-one
    between versions, and at least one matched pair differs beyond
    whitespace. Unparseable files disqualify the whole commit.
    """
    parser_config = parser_config or ParserConfig()
    changes: list[LogCentricChange] = []
    for pair in history:
        eligible = True
        pending: list[tuple[MethodContext, object, object]] = []
        for path, before, after in pair.changed_files:
            if before == after:
                continue
            if not path.endswith(SOURCE_SUFFIXES):
                log.debug("commit %s: non-source change %s", pair.commit_id, path)
                eligible = False
                break
            rb = extract_file(before, path, parser_config, project_id)
            ra = extract_file(after, path, parser_config, project_id)
            if rb.errors or ra.errors:
                log.debug("commit %s: parse trouble in %s, skipped",
                          pair.commit_id, path)
                eligible = False
                break
            before_cov = _covered_lines(rb.records)
            after_cov = _covered_lines(ra.records)
            bad_line = False
            for kind, b_line, a_line in diff_lines(before, after):
                if b_line is not None and b_line not in before_cov:
                    bad_line = True
                    break
                if a_line is not None and a_line not in after_cov:
                    bad_line = True
                    break
            if bad_line:
                eligible = False
                break
            b_index = _statement_index(rb.records)
            a_index = _statement_index(ra.records)
            if set(b_index) != set(a_index):
                log.debug("commit %s: statement added or deleted in %s",
                          pair.commit_id, path)
                eligible = False
                break
            for key in sorted(b_index):
                _, b_stmt = b_index[key]
                a_ctx, a_stmt = a_index[key]
                if _normalize_ws(b_stmt.raw_text) != _normalize_ws(a_stmt.raw_text):
                    pending.append((a_ctx, b_stmt, a_stmt))
        if eligible:
            for ctx, b_stmt, a_stmt in pending:
                changes.append(LogCentricChange(
                    project_id=project_id,
                    commit_id=pair.commit_id,
                    before=b_stmt,
                    after=a_stmt,
                    context=ctx,
                ))
    return changes
