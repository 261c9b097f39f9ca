"""
Stepping the greedy merge loop by hand
"""

from greedycut import best_pair, init_state, load_edge_list, merge, objective_of_state, run

## A unit path: every vertex starts alone, objective = n
g = load_edge_list("0 1 1\n1 2 1\n")
state = init_state(g)
print("objective", state.objective)
print("queue", state.queue_entries())

## The best pair by gain; ties go to the smaller pair
i, j, delta = best_pair(state)
print("best", (i, j), "gain", delta)

## Merging creates cluster 3 and refreshes only its neighbors' entries
e = merge(state, i, j)
print(state.record(e))
print("queue", state.queue_entries())
print("objective", state.objective, "direct", objective_of_state(state))

## The full loop, down to c clusters
part, trace, report = run(g, 2)
print(part.labels)
print(trace.to_text())
print(report.to_json(timings=False))

## Disconnected graphs: once no adjacent pair is left, the best
## non-adjacent merge (gain computed with zero shared weight) is taken
g2 = load_edge_list("0 1 1\n2 3 1\n")
part, trace, report = run(g2, 1)
print(trace.to_text(), "fallback merges:", report.fallback_merges)
