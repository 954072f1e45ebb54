"""Print the layer decomposition of a small table and the shape of each layer."""

from divsearch.poset import layer_decomposition, layer_shape

n = 60
for grid in layer_decomposition(n):
    print(f"L_{grid.base}  shape={grid.shape}  size={grid.size}")
    for row in grid.rows:
        print("   ", " ".join(f"{i:3d}" for i in row))

# shape depends only on q = n // b
print(layer_shape(60 // 1) == layer_shape(61 // 1), layer_shape(12))
