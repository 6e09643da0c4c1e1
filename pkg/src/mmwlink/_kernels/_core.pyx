# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python kernels in ``_py``.

Operation order matches ``_py`` exactly and the module is built without
-ffast-math and with -ffp-contract=off, so float results are
bit-identical to the reference implementation. Keep both files in sync
when changing either.
"""


def chain_walk(double[:, ::1] cum_rows, Py_ssize_t start_state,
               double[::1] uniforms, Py_ssize_t bin_slots,
               long long[::1] state_counts, long long[:, ::1] bin_counts):
    cdef Py_ssize_t state = start_state
    cdef Py_ssize_t n_bins = bin_counts.shape[0]
    cdef Py_ssize_t n_slots = uniforms.shape[0]
    cdef Py_ssize_t t, b, j
    cdef double u
    for t in range(n_slots):
        state_counts[state] += 1
        b = t // bin_slots
        if b < n_bins:
            bin_counts[b, state] += 1
        u = uniforms[t]
        j = 0
        while u >= cum_rows[state, j]:
            j += 1
        state = j
    return state


def serve_frames(long long queue, double t0, double t1, double load_bps,
                 double mcs_bps, double t_acc, long long a_max_bits,
                 long long q_bits, double bin_len, long long[::1] bins,
                 long long[::1] counters):
    cdef Py_ssize_t n_bins = bins.shape[0]
    cdef double t = t0
    cdef double access_end, dt, tx, tx_end
    cdef long long arr, space, frame
    cdef Py_ssize_t b
    while True:
        access_end = t + t_acc
        if access_end >= t1:
            dt = t1 - t
            arr = <long long>(load_bps * dt + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
            return queue
        arr = <long long>(load_bps * t_acc + 0.5)
        counters[0] += arr
        space = q_bits - queue
        if arr > space:
            counters[2] += arr - space
            arr = space
        queue += arr
        frame = queue if queue < a_max_bits else a_max_bits
        if frame == 0:
            if load_bps == 0.0:
                return queue
            t = access_end
            continue
        tx = frame / mcs_bps
        tx_end = access_end + tx
        if tx_end > t1:
            dt = t1 - access_end
            arr = <long long>(load_bps * dt + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
            return queue
        arr = <long long>(load_bps * tx + 0.5)
        counters[0] += arr
        space = q_bits - queue
        if arr > space:
            counters[2] += arr - space
            arr = space
        queue += arr
        queue -= frame
        counters[1] += frame
        b = <Py_ssize_t>(tx_end / bin_len)
        if b < n_bins:
            bins[b] += frame
        t = tx_end
