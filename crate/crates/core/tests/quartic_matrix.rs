use delpezzo::family_quartic::{table4_matrix, CellSource};

#[test]
fn every_quartic_cell_reproduces() {
    let cells = table4_matrix();
    assert_eq!(cells.len(), 44);
    for c in &cells {
        if !matches!(c.source, Some(CellSource::Cubic { .. })) {
            assert!(c.matches, "row {} {:?}: {:?}", c.row, c.column, c);
        }
    }
    assert_eq!(cells.iter().filter(|c| c.impossible.is_some()).count(), 6);
}
