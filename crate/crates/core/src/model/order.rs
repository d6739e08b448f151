use super::{Element, Model, ModelError, ModelExt};

/// `x <= y` iff `x < y` or `x = y`.
pub fn leq(model: &dyn Model, x: &Element, y: &Element) -> Result<bool, ModelError> {
    if model.less(x, y)? {
        return Ok(true);
    }
    Ok(x == y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    /// `{x : x < p}`
    Strict,
    /// `{x : x <= p}`
    Reflexive,
    /// `{x : succ(x) = p}`
    Successor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub elements: Vec<Element>,
    /// No carrier element outside `elements` stands in the relation to `p`.
    pub exhaustive: bool,
}

impl Section {
    pub fn contains(&self, x: &Element) -> bool {
        self.elements.contains(x)
    }
}

/// The elements standing in relation `kind` to `p`, drawn from the first
/// `budget` enumerated elements unless the model's finiteness oracle (or
/// the successor relation's injectivity) pins down the whole section.
pub fn section(
    model: &dyn Model,
    kind: SectionKind,
    p: &Element,
    budget: usize,
) -> Result<Section, ModelError> {
    model.check(p)?;
    if kind == SectionKind::Successor {
        return section_within(model, kind, p, &[]);
    }
    let universe = model.enumerate(budget);
    section_within(model, kind, p, &universe)
}

/// [`section`] over an already enumerated universe.
pub fn section_within(
    model: &dyn Model,
    kind: SectionKind,
    p: &Element,
    universe: &[Element],
) -> Result<Section, ModelError> {
    model.check(p)?;
    match kind {
        SectionKind::Successor => Ok(Section {
            elements: model.apply_pred(p)?.into_iter().collect(),
            exhaustive: true,
        }),
        SectionKind::Strict => strict(model, p, universe),
        SectionKind::Reflexive => {
            let mut s = strict(model, p, universe)?;
            if !s.contains(p) {
                s.elements.push(p.clone());
            }
            Ok(s)
        }
    }
}

fn strict(model: &dyn Model, p: &Element, universe: &[Element]) -> Result<Section, ModelError> {
    if let Some(full) = model.finite_strict_section(p) {
        return Ok(Section {
            elements: full,
            exhaustive: true,
        });
    }
    let mut elements = Vec::new();
    for x in universe {
        if model.relate(x, p)? {
            elements.push(x.clone());
        }
    }
    Ok(Section {
        elements,
        exhaustive: false,
    })
}
