"""Pure-Python reference kernels.

These are the hot inner loops of both simulators. The compiled twin in
``_core.pyx`` must mirror them operation for operation: the chain walk
performs no floating-point arithmetic at all, and the frame loop keeps
the exact order of float operations, so results are bit-identical
across backends.
"""

from __future__ import annotations


def chain_walk(cum_rows, start_state, uniforms, bin_slots, state_counts,
               bin_counts):
    """Walk the chain one slot per uniform draw, counting occupancy.

    ``cum_rows`` holds per-state cumulative transition probabilities
    with the final column forced above 1 so the scan always terminates;
    state ``s`` is chosen as the first column whose cumulative value
    exceeds the draw. The slot is credited to the state occupied before
    the transition. Returns the final state.
    """
    state = start_state
    n_bins = bin_counts.shape[0]
    n_slots = uniforms.shape[0]
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


def serve_frames(queue, t0, t1, load_bps, mcs_bps, t_acc, a_max_bits,
                 q_bits, bin_len, bins, counters):
    """Run access-transmit cycles over [t0, t1) against a fluid arrival.

    Arrivals accrue continuously at ``load_bps`` and are booked as
    integer bits per phase (rounded half-up), clipped to the queue
    capacity with the excess counted as dropped. A frame is sized at
    the end of its access phase; its bits stay in the queue until the
    transmission completes, so a frame cut off by ``t1`` is lost air
    time but loses no data. Delivered bits land in the 500 ms-style
    bin containing the completion instant. ``counters`` accumulates
    (arrived, delivered, dropped). Returns the queue level at ``t1``.
    """
    n_bins = bins.shape[0]
    t = t0
    while True:
        access_end = t + t_acc
        if access_end >= t1:
            dt = t1 - t
            arr = int(load_bps * dt + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
            return queue
        arr = int(load_bps * t_acc + 0.5)
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
            arr = int(load_bps * dt + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
            return queue
        arr = int(load_bps * tx + 0.5)
        counters[0] += arr
        space = q_bits - queue
        if arr > space:
            counters[2] += arr - space
            arr = space
        queue += arr
        queue -= frame
        counters[1] += frame
        b = int(tx_end / bin_len)
        if b < n_bins:
            bins[b] += frame
        t = tx_end
