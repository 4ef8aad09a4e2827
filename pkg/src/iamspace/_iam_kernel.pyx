# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled space-only runner; same algorithm as ``_iam_kernel_py``."""

from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libc.stdint cimport int64_t, uint64_t

cdef enum:
    DOWN = 0
    UP = 1
    VAR = 0
    ABS = 1
    APP = 2
    BULLET = -1


cdef inline uint64_t pair_key(int64_t a, int64_t b) nogil:
    return (<uint64_t>(a + 1) << 32) | <uint64_t>b


def run_space(kind_, left_, right_, parent_, binder_, depth_, long long fuel, long long x):
    cdef vector[int] kind = kind_
    cdef vector[int] left = left_
    cdef vector[int] right = right_
    cdef vector[int] parent = parent_
    cdef vector[int] binder = binder_
    cdef vector[int] depth = depth_

    # logs: id 0 is empty; cons cells (head lp, tail log)
    cdef vector[int] log_head, log_tail
    cdef vector[long long] log_x
    cdef unordered_map[uint64_t, int] log_ids
    # logged positions
    cdef vector[int] lp_var, lp_log
    cdef vector[long long] lp_x
    cdef unordered_map[uint64_t, int] lp_ids
    # tape: id 0 is empty
    cdef vector[int] t_head, t_tail
    cdef vector[long long] t_units, t_x
    cdef vector[int] entries

    log_head.push_back(-1)
    log_tail.push_back(0)
    log_x.push_back(0)
    t_head.push_back(0)
    t_tail.push_back(0)
    t_units.push_back(0)
    t_x.push_back(0)

    cdef int pos = 0, tape = 0, log = 0, d = DOWN
    cdef int k, h, li, m, i, p, par, sub
    cdef long long steps = 0, best_u = 0, best_x = 0, best_v = 0, u, xs, v
    cdef uint64_t key

    while True:
        k = kind[pos]
        if d == DOWN and k == ABS and tape == 0:
            return steps, 1, best_u, best_x
        if steps >= fuel:
            return steps, 0, best_u, best_x
        if d == DOWN:
            if k == APP:
                tape = _push(BULLET, tape, t_head, t_tail, t_units, t_x, lp_x)
                pos = left[pos]
            elif k == ABS:
                h = t_head[tape]
                tape = t_tail[tape]
                if h == BULLET:
                    pos = left[pos]
                else:
                    # bt2: restore the position's log on top of the current log
                    entries.clear()
                    li = lp_log[h]
                    while li:
                        entries.push_back(log_head[li])
                        li = log_tail[li]
                    for i in range(<int>entries.size() - 1, -1, -1):
                        log = _cons_log(entries[i], log, log_head, log_tail, log_x, log_ids, lp_x)
                    pos = lp_var[h]
                    d = UP
            else:
                m = depth[pos]
                entries.clear()
                li = log
                for i in range(m):
                    if li == 0:
                        raise RuntimeError("var with a short log")
                    entries.push_back(log_head[li])
                    li = log_tail[li]
                log = li
                sub = 0
                for i in range(<int>entries.size() - 1, -1, -1):
                    sub = _cons_log(entries[i], sub, log_head, log_tail, log_x, log_ids, lp_x)
                key = pair_key(pos, sub)
                if lp_ids.count(key):
                    p = lp_ids[key]
                else:
                    p = lp_var.size()
                    lp_var.push_back(pos)
                    lp_log.push_back(sub)
                    lp_x.push_back(1 + log_x[sub])
                    lp_ids[key] = p
                tape = _push(p, tape, t_head, t_tail, t_units, t_x, lp_x)
                pos = binder[pos]
                d = UP
        else:
            par = parent[pos]
            if par < 0:
                raise RuntimeError("upward move at the root")
            if kind[par] == ABS:
                tape = _push(BULLET, tape, t_head, t_tail, t_units, t_x, lp_x)
                pos = par
            elif left[par] == pos:
                if tape == 0:
                    raise RuntimeError("empty tape on the function side")
                h = t_head[tape]
                tape = t_tail[tape]
                if h == BULLET:
                    pos = par
                else:
                    log = _cons_log(h, log, log_head, log_tail, log_x, log_ids, lp_x)
                    pos = right[par]
                    d = DOWN
            else:
                if log == 0:
                    raise RuntimeError("bt1 with an empty log")
                tape = _push(log_head[log], tape, t_head, t_tail, t_units, t_x, lp_x)
                log = log_tail[log]
                pos = left[par]
                d = DOWN
        steps += 1
        u = t_units[tape]
        xs = t_x[tape] + log_x[log]
        v = u + xs * x
        if v > best_v or (v == best_v and xs > best_x):
            best_v = v
            best_u = u
            best_x = xs


cdef inline int _cons_log(int h, int tail, vector[int]& log_head, vector[int]& log_tail,
                          vector[long long]& log_x, unordered_map[uint64_t, int]& log_ids,
                          vector[long long]& lp_x):
    cdef uint64_t key = pair_key(h, tail)
    cdef int i
    if log_ids.count(key):
        return log_ids[key]
    i = log_head.size()
    log_head.push_back(h)
    log_tail.push_back(tail)
    log_x.push_back(lp_x[h] + log_x[tail])
    log_ids[key] = i
    return i


cdef inline int _push(int h, int tail, vector[int]& t_head, vector[int]& t_tail,
                      vector[long long]& t_units, vector[long long]& t_x, vector[long long]& lp_x):
    t_head.push_back(h)
    t_tail.push_back(tail)
    if h == BULLET:
        t_units.push_back(t_units[tail] + 1)
        t_x.push_back(t_x[tail])
    else:
        t_units.push_back(t_units[tail])
        t_x.push_back(t_x[tail] + lp_x[h])
    return t_head.size() - 1
