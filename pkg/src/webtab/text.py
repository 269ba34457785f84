"""Case mapping that never changes the length of a string."""


def simple_upper(s: str) -> str:
    # str.upper() applies full case mapping ("ß" -> "SS"); keep one-to-one mappings only
    return "".join(u if len(u := ch.upper()) == 1 else ch for ch in s)


def simple_lower(s: str) -> str:
    return "".join(u if len(u := ch.lower()) == 1 else ch for ch in s)
