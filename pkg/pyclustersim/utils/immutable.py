from collections.abc import Hashable

def _unique_names(names, what):
    if not isinstance(names, (list, tuple)):
        raise TypeError("{} must be a list or tuple".format(what))
    if len(set(names)) != len(names):
        raise TypeError("elements in {} must be unique".format(what))
    return tuple(names)

class Immutable(Hashable):
    """Base class for the simulator's value records (configurations, layouts,
    estimates, fronthaul checks).

    A subclass declares __slots__.  _immutable_slots, the fields that make up
    the value, defaults to all of __slots__; any other slot is a cache that is
    ignored by equality and hashing and has to be filled with
    object.__setattr__.

    Construction always goes through init_validate(), whose arguments match
    _immutable_slots.  It checks them, fills in defaults and returns a tuple
    with one hashable value per field.  Pickling and replace() call it again
    on already-normalized values, so it has to accept its own output.
    """

    __slots__ = ()

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "__slots__" not in cls.__dict__:
            raise TypeError("{} must define __slots__".format(cls.__name__))
        slots = _unique_names(cls.__slots__, "__slots__")
        if "_immutable_slots" in cls.__dict__:
            fields = _unique_names(cls._immutable_slots, "_immutable_slots")
            if not set(fields) <= set(slots):
                raise TypeError("_immutable_slots must be a subset of __slots__")
        else:
            cls._immutable_slots = slots

    def __init__(self, *args, **kwargs):
        values = self.init_validate(*args, **kwargs)
        assert isinstance(values, tuple) and len(values) == len(self._immutable_slots)
        for field, value in zip(self._immutable_slots, values):
            assert isinstance(value, Hashable), field
            object.__setattr__(self, field, value)

    def _values(self):
        return tuple(getattr(self, field) for field in self._immutable_slots)

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and self._values() == other._values())

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._values())

    def __repr__(self):
        return "{}({})".format(type(self).__name__, ", ".join(map(repr, self._values())))

    def __reduce__(self):
        return (type(self), self._values())

    def __setattr__(self, name, value):
        raise TypeError("{} is immutable".format(type(self).__name__))

    def __delattr__(self, name):
        raise TypeError("{} is immutable".format(type(self).__name__))

    def replace(self, **changes):
        """Copy with some fields changed, validated like a new object"""
        for name in changes:
            if name not in self._immutable_slots:
                raise TypeError("unexpected keyword argument: {}".format(name))
        fields = dict(zip(self._immutable_slots, self._values()))
        fields.update(changes)
        return type(self)(**fields)

    def init_validate(self, *args, **kwargs):
        # default: take the fields positionally or by name, unchanged
        if len(args) > len(self._immutable_slots):
            raise TypeError("expected {} arguments but received {}".format(len(self._immutable_slots), len(args)))
        values = list(args)
        for field in self._immutable_slots[len(args):]:
            if field not in kwargs:
                raise TypeError("argument not provided: {}".format(field))
            values.append(kwargs.pop(field))
        if kwargs:
            raise TypeError("unexpected keyword argument: {}".format(next(iter(kwargs))))
        return tuple(values)
