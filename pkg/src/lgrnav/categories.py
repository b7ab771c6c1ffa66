from typing import Tuple

WALL = "wall"

#: Candidate room categories offered to the room classifier, in prompt order.
DEFAULT_CATEGORIES: Tuple[str, ...] = (
    "bathroom",
    "bedroom",
    "reception room",
    "laundry room",
    "kitchen",
    "home office",
    "living room",
    WALL,
)

RoomCategoryList = Tuple[str, ...]


def room_categories(categories: RoomCategoryList = DEFAULT_CATEGORIES) -> RoomCategoryList:
    """Return the categories a room (not a wall) may take, in list order."""
    return tuple(c for c in categories if c != WALL)


def normalize_category(token: str) -> str:
    """Fold case and treat hyphens/underscores as spaces ("Living-Room" -> "living room")."""
    cleaned = token.replace("-", " ").replace("_", " ").lower()
    return " ".join(cleaned.split())
