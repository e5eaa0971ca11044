"""
Stream specs: the mini-grammar naming an oracle real on the command line.

    zeros | ones | alt | periodic:BITS | file:PATH | random:SEED
"""
import logging
from pathlib import Path

from core.bits import BitStream, BitString
from core.errors import DeskError, ParseError

logger = logging.getLogger(__name__)

STREAM_KINDS = ("zeros", "ones", "alt", "periodic:", "file:", "random:")


def _file_stream(path_text: str, offset: int) -> BitStream:
    path = Path(path_text)
    if not path.exists():
        raise ParseError(f"stream file not found: {path}", position=offset)
    text = path.read_text().strip()
    if not text:
        raise ParseError(f"stream file {path} is empty", position=offset)
    try:
        BitString(text)
    except ParseError as e:
        raise ParseError(f"stream file {path} holds a non-bit character", position=offset, file_position=e.position)

    tail = text[-1] == "1"
    warned = []

    def rule(i: int) -> int:
        if i < len(text):
            return text[i] == "1"
        if not warned:
            warned.append(i)
            logger.warning(f"{path} has only {len(text)} bits; repeating '{text[-1]}' beyond its end")
        return tail

    return BitStream(rule, f"file:{path_text}")


def streamspec_parse(spec: str) -> BitStream:
    """
    Parse a stream spec.

    Args:
        spec: One of the forms above

    Returns:
        The named BitStream

    Raises:
        ParseError: unknown form, bad bits or seed, or an unreadable file
    """
    text = spec.strip()
    if text == "zeros":
        return BitStream.zeros()
    if text == "ones":
        return BitStream.ones()
    if text == "alt":
        return BitStream.alternating()
    kind, sep, body = text.partition(":")
    if not sep:
        raise ParseError(f"unknown stream {text!r} (expected one of {', '.join(STREAM_KINDS)})", position=0)
    offset = len(kind) + 1
    if kind == "periodic":
        if not body:
            raise ParseError("periodic stream needs a period", position=offset)
        try:
            return BitStream.periodic(body)
        except ParseError as e:
            raise ParseError("periodic stream uses only '0'/'1'", position=offset + (e.position or 0))
        except DeskError as e:
            raise ParseError(e.message, position=offset)
    if kind == "file":
        return _file_stream(body, offset)
    if kind == "random":
        try:
            return BitStream.seeded(int(body))
        except ValueError:
            raise ParseError(f"random stream needs an integer seed, got {body!r}", position=offset)
    raise ParseError(f"unknown stream kind {kind!r}", position=0)
