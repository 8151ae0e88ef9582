//! Finite-domain state variables (`define-item`) and one-dimensional arrays
//! (`define-array`), lowered one-hot onto propositional atoms.

use crate::error::{Error, Result};
use crate::formula::{Atom, Core, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemDecl {
    pub name: String,
    pub domain: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayDecl {
    pub name: String,
    pub index_domain: Vec<Term>,
    pub value_domain: Vec<Term>,
}

/// Everything a spec file declares. Scoped to one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    pub items: Vec<ItemDecl>,
    pub arrays: Vec<ArrayDecl>,
    /// Atoms registered through `(declare ...)`.
    pub atoms: Vec<Atom>,
}

fn check_distinct(name: &str, dom: &[Term]) -> Result<()> {
    if dom.is_empty() {
        return Err(Error::Domain(format!("`{name}` has an empty domain")));
    }
    for (n, v) in dom.iter().enumerate() {
        if dom[..n].contains(v) {
            return Err(Error::Domain(format!("`{name}` lists value {v} twice")));
        }
    }
    Ok(())
}

impl ItemDecl {
    pub fn new(name: &str, domain: Vec<Term>) -> Result<Self> {
        check_distinct(name, &domain)?;
        Ok(ItemDecl {
            name: name.to_ascii_uppercase(),
            domain,
        })
    }
}

impl ArrayDecl {
    pub fn new(name: &str, index_domain: Vec<Term>, value_domain: Vec<Term>) -> Result<Self> {
        check_distinct(name, &index_domain)?;
        check_distinct(name, &value_domain)?;
        Ok(ArrayDecl {
            name: name.to_ascii_uppercase(),
            index_domain,
            value_domain,
        })
    }
}

/// `(name= value)` as a dedicated atom.
pub fn lower_item_atom(decl: &ItemDecl, value: &Term) -> Result<Core> {
    if !decl.domain.contains(value) {
        return Err(Error::Domain(format!(
            "({}= {value}): {value} is not in the domain of `{}`",
            decl.name, decl.name
        )));
    }
    Ok(Core::Atom(Atom::Item(decl.name.clone(), value.clone())))
}

/// `(name= index value)` as a dedicated atom.
pub fn lower_array_atom(decl: &ArrayDecl, index: &Term, value: &Term) -> Result<Core> {
    if !decl.index_domain.contains(index) {
        return Err(Error::Domain(format!(
            "({}= {index} {value}): index {index} is out of range",
            decl.name
        )));
    }
    if !decl.value_domain.contains(value) {
        return Err(Error::Domain(format!(
            "({}= {index} {value}): {value} is not in the value domain of `{}`",
            decl.name, decl.name
        )));
    }
    Ok(Core::Atom(Atom::Array(decl.name.clone(), index.clone(), value.clone())))
}

fn exactly_one(atoms: Vec<Atom>) -> Vec<Core> {
    let mut out = vec![Core::Or(atoms.iter().cloned().map(Core::Atom).collect())];
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            out.push(Core::not(Core::And(vec![
                Core::Atom(atoms[i].clone()),
                Core::Atom(atoms[j].clone()),
            ])));
        }
    }
    out
}

impl Declarations {
    pub fn item(&self, name: &str) -> Option<&ItemDecl> {
        self.items.iter().find(|d| d.name == name)
    }

    pub fn array(&self, name: &str) -> Option<&ArrayDecl> {
        self.arrays.iter().find(|d| d.name == name)
    }

    /// Every atom the declarations introduce, in declaration order.
    pub fn declared_atoms(&self) -> Vec<Atom> {
        let mut out = self.atoms.clone();
        for item in &self.items {
            out.extend(item.domain.iter().map(|v| Atom::Item(item.name.clone(), v.clone())));
        }
        for arr in &self.arrays {
            for i in &arr.index_domain {
                out.extend(
                    arr.value_domain
                        .iter()
                        .map(|v| Atom::Array(arr.name.clone(), i.clone(), v.clone())),
                );
            }
        }
        out
    }

    /// Exactly-one constraints for every item and array cell, to be asserted
    /// at every instant.
    pub fn domain_constraints(&self) -> Vec<Core> {
        let mut out = Vec::new();
        for item in &self.items {
            out.extend(exactly_one(
                item.domain.iter().map(|v| Atom::Item(item.name.clone(), v.clone())).collect(),
            ));
        }
        for arr in &self.arrays {
            for i in &arr.index_domain {
                out.extend(exactly_one(
                    arr.value_domain
                        .iter()
                        .map(|v| Atom::Array(arr.name.clone(), i.clone(), v.clone()))
                        .collect(),
                ));
            }
        }
        out
    }

    /// Checks that every item/array atom in `f` names a declared variable and
    /// an in-domain value, and that propositional atoms agree in arity with
    /// their declarations.
    pub fn validate(&self, f: &Core) -> Result<()> {
        let mut atoms = Vec::new();
        f.atoms(&mut atoms);
        for atom in &atoms {
            match atom {
                Atom::Item(name, v) => {
                    let decl = self
                        .item(name)
                        .ok_or_else(|| Error::Domain(format!("undeclared item `{name}`")))?;
                    lower_item_atom(decl, v)?;
                }
                Atom::Array(name, i, v) => {
                    let decl = self
                        .array(name)
                        .ok_or_else(|| Error::Domain(format!("undeclared array `{name}`")))?;
                    lower_array_atom(decl, i, v)?;
                }
                Atom::Prop(name, args) => {
                    let clash = self.atoms.iter().find(|d| match d {
                        Atom::Prop(n, a) => n == name && a.len() != args.len(),
                        _ => false,
                    });
                    if let Some(d) = clash {
                        return Err(Error::Domain(format!(
                            "`{}` used with arity {} but declared as {d}",
                            name,
                            args.len()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
