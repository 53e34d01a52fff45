from typing import Dict, List, Optional


class _DictWithGetAttr:
    """Name -> object registry that also exposes its entries as attributes."""

    def __init__(self, what: str, obj: Optional[Dict] = None):
        self.__dict__["_what"] = what
        self.__dict__.update(obj or {})

    def __getitem__(self, key):
        return self.__dict__[key]

    def __setitem__(self, key, value):
        self.__dict__[key] = value

    def __contains__(self, key):
        return key in self.names()

    def __iter__(self):
        return iter(self.names())

    def names(self) -> List[str]:
        return [k for k in self.__dict__ if k != "_what"]

    def resolve(self, name: str):
        if name not in self:
            raise KeyError(
                f"The specified {self._what} '{name}' was not registered. Registered "
                f"{self._what}s are: {self.names()}"
            )
        return self[name]

    def __repr__(self):
        return "\n".join([f"{k}: {repr(self[k])}" for k in self.names()])
