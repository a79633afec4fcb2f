"""Hardware atomics for nogil numba code, emitted as LLVM ``cmpxchg``/atomic loads.

All cells are 64-bit and 8-byte aligned (numpy guarantees that for int64 and
float64 arrays). Float cells are handled through their int64 view.
"""

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic


def _cell_ptr(context, builder, arrty, arr, idx):
    ary = context.make_array(arrty)(context, builder, arr)
    return cgutils.get_item_pointer(context, builder, arrty, ary, [idx], wraparound=False)


@intrinsic
def cas_i64(typingctx, arr, idx, expected, desired):
    """Compare-and-swap ``arr[idx]``; returns the value seen before the attempt."""
    if not (isinstance(arr, types.Array) and arr.dtype == types.int64):
        return None
    sig = types.int64(arr, types.intp, types.int64, types.int64)

    def codegen(context, builder, signature, args):
        ptr = _cell_ptr(context, builder, signature.args[0], args[0], args[1])
        res = builder.cmpxchg(ptr, args[2], args[3], "seq_cst", "seq_cst")
        return builder.extract_value(res, 0)

    return sig, codegen


@intrinsic
def load_i64(typingctx, arr, idx):
    if not (isinstance(arr, types.Array) and arr.dtype == types.int64):
        return None
    sig = types.int64(arr, types.intp)

    def codegen(context, builder, signature, args):
        ptr = _cell_ptr(context, builder, signature.args[0], args[0], args[1])
        return builder.load_atomic(ptr, "acquire", 8)

    return sig, codegen


@intrinsic
def store_i64(typingctx, arr, idx, value):
    if not (isinstance(arr, types.Array) and arr.dtype == types.int64):
        return None
    sig = types.void(arr, types.intp, types.int64)

    def codegen(context, builder, signature, args):
        ptr = _cell_ptr(context, builder, signature.args[0], args[0], args[1])
        builder.store_atomic(args[2], ptr, "release", 8)
        return context.get_dummy_value()

    return sig, codegen


@intrinsic
def f64_bits(typingctx, x):
    sig = types.int64(types.float64)

    def codegen(context, builder, signature, args):
        return builder.bitcast(args[0], ir.IntType(64))

    return sig, codegen


@intrinsic
def bits_f64(typingctx, x):
    sig = types.float64(types.int64)

    def codegen(context, builder, signature, args):
        return builder.bitcast(args[0], ir.DoubleType())

    return sig, codegen


@njit(nogil=True, cache=True)
def atomic_add_f64(bits, idx, value):
    """``float(bits[idx]) += value`` as a compare-exchange retry loop."""
    old = load_i64(bits, idx)
    while True:
        seen = cas_i64(bits, idx, old, f64_bits(bits_f64(old) + value))
        if seen == old:
            return
        old = seen


@njit(nogil=True, cache=True)
def atomic_min_i64(arr, idx, value):
    """Lower ``arr[idx]`` to ``value`` if smaller; returns the resulting minimum."""
    old = load_i64(arr, idx)
    while value < old:
        seen = cas_i64(arr, idx, old, value)
        if seen == old:
            return value
        old = seen
    return old


@njit(nogil=True, cache=True)
def fetch_add_i64(arr, idx, value):
    old = load_i64(arr, idx)
    while True:
        seen = cas_i64(arr, idx, old, old + value)
        if seen == old:
            return old
        old = seen


@njit(nogil=True, cache=True)
def spin_lock(locks, idx):
    while cas_i64(locks, idx, 0, 1) != 0:
        pass


@njit(nogil=True, cache=True)
def spin_unlock(locks, idx):
    store_i64(locks, idx, 0)


@njit(nogil=True, cache=True)
def locked_add_f64(data, locks, slot, cell, value):
    s = slot % locks.size
    spin_lock(locks, s)
    data[cell] += value
    spin_unlock(locks, s)


def int64_view(a: np.ndarray) -> np.ndarray:
    if a.dtype != np.float64 or not a.flags.c_contiguous:
        raise ValueError("atomic float cells need a C-contiguous float64 array")
    return a.reshape(-1).view(np.int64)


@njit(nogil=True, cache=True)
def atomic_load(arr, idx):
    return load_i64(arr, idx)
