"""Image panel navigation: folder grid -> image grid -> full image.

Folders come from a directory tree (one subdirectory per folder); the
"captures" folder always exists and receives screenshot records as they
are taken.  Grids show 3x3 thumbnails per page; paging clamps at the
ends rather than wrapping.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

log = logging.getLogger(__name__)

CAPTURES_FOLDER = "captures"
GRID_COLS = 3
GRID_ROWS = 3
GRID_PAGE_SIZE = GRID_COLS * GRID_ROWS

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".webp"}


class BrowserError(IndexError):
    """Selection target does not exist in the current mode."""


class BrowserMode(Enum):
    FOLDER_GRID = "folder_grid"
    IMAGE_GRID = "image_grid"
    FULL_IMAGE = "full_image"


class PageDirection(Enum):
    PREV = -1
    NEXT = 1


@dataclass
class Folder:
    name: str
    images: List[str] = field(default_factory=list)


class ImageBrowser:
    """Bounded navigation state over an ordered folder list."""

    def __init__(self, folders: Optional[List[Folder]] = None) -> None:
        self._folders: Dict[str, Folder] = {}
        for f in folders or []:
            if f.name in self._folders:
                raise ValueError(f"duplicate folder name {f.name!r}")
            self._folders[f.name] = f
        self._folders.setdefault(CAPTURES_FOLDER, Folder(CAPTURES_FOLDER))
        self.mode = BrowserMode.FOLDER_GRID
        self.folder_name: Optional[str] = None
        self.index = 0
        self.grid_page = 0

    @classmethod
    def from_directory(cls, root: Path) -> "ImageBrowser":
        """One folder per subdirectory, images sorted by filename."""
        folders = []
        root = Path(root)
        for sub in sorted(p for p in root.iterdir() if p.is_dir()):
            images = sorted(
                str(p) for p in sub.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
            )
            folders.append(Folder(sub.name, images))
        return cls(folders)

    # Folder order in the grid is alphabetical.
    @property
    def folder_names(self) -> List[str]:
        return sorted(self._folders)

    def folder(self, name: str) -> Folder:
        try:
            return self._folders[name]
        except KeyError:
            raise BrowserError(f"no folder named {name!r}") from None

    @property
    def current_folder(self) -> Optional[Folder]:
        return self._folders[self.folder_name] if self.folder_name else None

    def add_folder(self, folder: Folder) -> None:
        if folder.name in self._folders:
            raise ValueError(f"duplicate folder name {folder.name!r}")
        self._folders[folder.name] = folder

    def add_capture(self, ref: str) -> None:
        """Append a screenshot reference as the last item of the captures folder."""
        self._folders[CAPTURES_FOLDER].images.append(ref)

    # -- navigation -----------------------------------------------------------

    def select_folder(self, position: int) -> BrowserMode:
        """Open the folder at an absolute position in the alphabetical list."""
        if self.mode is not BrowserMode.FOLDER_GRID:
            raise BrowserError("select_folder requires the folder grid")
        names = self.folder_names
        if not 0 <= position < len(names):
            raise BrowserError(f"folder position {position} out of range")
        self.folder_name = names[position]
        self.mode = BrowserMode.IMAGE_GRID
        self.index = 0
        self.grid_page = 0
        return self.mode

    def select_image(self, position: int) -> BrowserMode:
        """Open one image of the current folder at full panel size."""
        if self.mode is not BrowserMode.IMAGE_GRID or self.current_folder is None:
            raise BrowserError("select_image requires the image grid")
        if not 0 <= position < len(self.current_folder.images):
            raise BrowserError(f"image index {position} out of range")
        self.index = position
        self.mode = BrowserMode.FULL_IMAGE
        return self.mode

    def back(self) -> BrowserMode:
        """Drill back up one level; a no-op at the folder grid."""
        if self.mode is BrowserMode.FULL_IMAGE:
            self.mode = BrowserMode.IMAGE_GRID
            self.grid_page = self.index // GRID_PAGE_SIZE
        elif self.mode is BrowserMode.IMAGE_GRID:
            self.mode = BrowserMode.FOLDER_GRID
            self.folder_name = None
            self.index = 0
            self.grid_page = 0
        return self.mode

    def _grid_item_count(self) -> int:
        if self.mode is BrowserMode.FOLDER_GRID:
            return len(self._folders)
        folder = self.current_folder
        return len(folder.images) if folder else 0

    def max_grid_page(self) -> int:
        return max(0, (self._grid_item_count() - 1) // GRID_PAGE_SIZE)

    def page(self, direction: PageDirection) -> BrowserMode:
        """Step to the next/previous image (full view) or grid page; clamped."""
        if self.mode is BrowserMode.FULL_IMAGE:
            folder = self.current_folder
            last = len(folder.images) - 1 if folder else 0
            self.index = min(max(self.index + direction.value, 0), max(last, 0))
        else:
            self.grid_page = min(
                max(self.grid_page + direction.value, 0), self.max_grid_page()
            )
        return self.mode

    # -- snapshots --------------------------------------------------------------

    def visible_grid_items(self) -> List[str]:
        """Names/paths shown on the current grid page."""
        if self.mode is BrowserMode.FOLDER_GRID:
            items = self.folder_names
        elif self.current_folder is not None:
            items = self.current_folder.images
        else:
            items = []
        start = self.grid_page * GRID_PAGE_SIZE
        return items[start : start + GRID_PAGE_SIZE]

    def to_dict(self) -> dict:
        folder = self.current_folder
        return {
            "mode": self.mode.value,
            "folder": self.folder_name,
            "index": self.index,
            "grid_page": self.grid_page,
            "visible": self.visible_grid_items(),
            "image": (
                folder.images[self.index]
                if self.mode is BrowserMode.FULL_IMAGE
                and folder is not None
                and folder.images
                else None
            ),
            "image_count": len(folder.images) if folder else None,
        }
