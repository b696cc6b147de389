/// A grid of label sets indexed from 1, as in `g[i][j]` for walks from
/// vertex `i` to vertex `j`. `level` counts applied closure pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix<S> {
    rows: usize,
    cols: usize,
    level: usize,
    cells: Vec<S>,
}

impl<S: Default + Clone> LabelMatrix<S> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            level: 0,
            cells: vec![S::default(); rows * cols],
        }
    }
}

impl<S> LabelMatrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub(crate) fn set_level(&mut self, level: usize) {
        self.level = level;
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "cell ({i}, {j}) outside {}x{}",
            self.rows,
            self.cols
        );
        (i - 1) * self.cols + (j - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.cells[self.offset(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut S {
        let at = self.offset(i, j);
        &mut self.cells[at]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        let at = self.offset(i, j);
        self.cells[at] = value;
    }

    /// Iterates `((i, j), cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &S)> {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .map(move |(at, cell)| ((at / cols + 1, at % cols + 1), cell))
    }
}
