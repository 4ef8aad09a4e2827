"""Pure-Python space-only runner; the compiled ``_iam_kernel`` mirrors it.

Logged positions and logs are hash-consed into integer tables so a step
costs O(level) list operations.  The tape is a cons list of nodes holding
cumulative unit and X counts.
"""

DOWN, UP = 0, 1
VAR, ABS, APP = 0, 1, 2
BULLET = -1


def run_space(kind, left, right, parent, binder, depth, fuel, x):
    # logs: id 0 is empty; cons cells (head lp, tail log)
    log_head = [-1]
    log_tail = [0]
    log_x = [0]
    log_ids = {}
    # logged positions: (var, log) -> id
    lp_var = []
    lp_log = []
    lp_x = []
    lp_ids = {}
    # tape: id 0 is empty
    t_head = [0]
    t_tail = [0]
    t_units = [0]
    t_x = [0]

    def cons_log(h, tail):
        key = (h, tail)
        i = log_ids.get(key)
        if i is None:
            i = len(log_head)
            log_head.append(h)
            log_tail.append(tail)
            log_x.append(lp_x[h] + log_x[tail])
            log_ids[key] = i
        return i

    def push(h, tail):
        t_head.append(h)
        t_tail.append(tail)
        if h == BULLET:
            t_units.append(t_units[tail] + 1)
            t_x.append(t_x[tail])
        else:
            t_units.append(t_units[tail])
            t_x.append(t_x[tail] + lp_x[h])
        return len(t_head) - 1

    pos, tape, log, d = 0, 0, 0, DOWN
    best_u, best_x, best_v = 0, 0, 0
    steps = 0
    while True:
        k = kind[pos]
        if d == DOWN and k == ABS and tape == 0:
            return steps, 1, best_u, best_x
        if steps >= fuel:
            return steps, 0, best_u, best_x
        if d == DOWN:
            if k == APP:
                tape = push(BULLET, tape)
                pos = left[pos]
            elif k == ABS:
                h = t_head[tape]
                tape = t_tail[tape]
                if h == BULLET:
                    pos = left[pos]
                else:
                    # bt2: restore the position's log on top of the current log
                    entries = []
                    li = lp_log[h]
                    while li:
                        entries.append(log_head[li])
                        li = log_tail[li]
                    for e in reversed(entries):
                        log = cons_log(e, log)
                    pos = lp_var[h]
                    d = UP
            else:
                m = depth[pos]
                entries = []
                li = log
                for _ in range(m):
                    if li == 0:
                        raise RuntimeError("var with a short log")
                    entries.append(log_head[li])
                    li = log_tail[li]
                log = li
                sub = 0
                for e in reversed(entries):
                    sub = cons_log(e, sub)
                key = (pos, sub)
                p = lp_ids.get(key)
                if p is None:
                    p = len(lp_var)
                    lp_var.append(pos)
                    lp_log.append(sub)
                    lp_x.append(1 + log_x[sub])
                    lp_ids[key] = p
                tape = push(p, tape)
                pos = binder[pos]
                d = UP
        else:
            par = parent[pos]
            if par < 0:
                raise RuntimeError("upward move at the root")
            if kind[par] == ABS:
                tape = push(BULLET, tape)
                pos = par
            elif left[par] == pos:
                if tape == 0:
                    raise RuntimeError("empty tape on the function side")
                h = t_head[tape]
                tape = t_tail[tape]
                if h == BULLET:
                    pos = par
                else:
                    log = cons_log(h, log)
                    pos = right[par]
                    d = DOWN
            else:
                if log == 0:
                    raise RuntimeError("bt1 with an empty log")
                tape = push(log_head[log], tape)
                log = log_tail[log]
                pos = left[par]
                d = DOWN
        steps += 1
        u = t_units[tape]
        xs = t_x[tape] + log_x[log]
        v = u + xs * x
        if v > best_v or (v == best_v and xs > best_x):
            best_v, best_u, best_x = v, u, xs
