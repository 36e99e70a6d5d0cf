from pathlib import Path

from exception.file_not_found_exception import FileNotFoundException
from model.channel.channel_model import from_upload
from scheme.channel.channel_scheme import ChannelSpec, ChannelUpload


def read_channel(path: str | Path) -> ChannelUpload:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundException(f"Channel file {path} not found")
    return ChannelUpload.parse_file(path)


def load_channel(path: str | Path) -> tuple[ChannelSpec, list[float] | None]:
    """Normalized channel and, for raw files, the peak intensities."""
    return from_upload(read_channel(path))
