use alloc::string::String;
use alloc::vec::Vec;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Index of a declared domain type.
    TypeId
);
id_type!(
    /// Index of a declared constant.
    ConstId
);
id_type!(
    /// Index of a declared function symbol.
    FuncId
);
id_type!(
    /// Index of a declared predicate symbol.
    PredId
);

#[derive(Clone, Debug, PartialEq)]
pub enum TypeKind {
    /// An explicit, nonempty list of constants.
    Finite(Vec<ConstId>),
    /// Generated from a seed constant by the functions returning this type.
    Infinite { seed: ConstId },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainType {
    pub name: String,
    pub kind: TypeKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstDecl {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuncDecl {
    pub name: String,
    pub args: Vec<TypeId>,
    pub ret: TypeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredDecl {
    pub name: String,
    pub args: Vec<TypeId>,
}

/// Declared types, constants, functions and predicates. Each namespace
/// holds unique names and ids are assigned in declaration order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Signature {
    pub types: Vec<DomainType>,
    pub constants: Vec<ConstDecl>,
    pub functions: Vec<FuncDecl>,
    pub predicates: Vec<PredDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.types.iter().position(|t| t.name == name).map(|i| TypeId(i as u32))
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.constants
            .iter()
            .position(|c| c.name == name)
            .map(|i| ConstId(i as u32))
    }

    pub fn func_id(&self, name: &str) -> Option<FuncId> {
        self.functions
            .iter()
            .position(|f| f.name == name)
            .map(|i| FuncId(i as u32))
    }

    pub fn pred_id(&self, name: &str) -> Option<PredId> {
        self.predicates
            .iter()
            .position(|p| p.name == name)
            .map(|i| PredId(i as u32))
    }

    pub fn ty(&self, id: TypeId) -> &DomainType {
        &self.types[id.index()]
    }

    pub fn constant(&self, id: ConstId) -> &ConstDecl {
        &self.constants[id.index()]
    }

    pub fn function(&self, id: FuncId) -> &FuncDecl {
        &self.functions[id.index()]
    }

    pub fn predicate(&self, id: PredId) -> &PredDecl {
        &self.predicates[id.index()]
    }

    pub fn is_infinite(&self, ty: TypeId) -> bool {
        matches!(self.ty(ty).kind, TypeKind::Infinite { .. })
    }

    /// Constants of a finite type; `None` for infinite types.
    pub fn finite_constants(&self, ty: TypeId) -> Option<&[ConstId]> {
        match &self.ty(ty).kind {
            TypeKind::Finite(cs) => Some(cs),
            TypeKind::Infinite { .. } => None,
        }
    }

    /// Function symbols whose return type is `ty`.
    pub fn generators(&self, ty: TypeId) -> impl Iterator<Item = FuncId> + '_ {
        self.functions
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.ret == ty)
            .map(|(i, _)| FuncId(i as u32))
    }

    pub fn add_finite_type(&mut self, name: &str, constants: &[&str]) -> Result<TypeId, String> {
        if constants.is_empty() {
            return Err(alloc::format!("finite type `{name}` needs at least one constant"));
        }
        let ty = self.push_type(name)?;
        let mut ids = Vec::with_capacity(constants.len());
        for c in constants {
            ids.push(self.push_constant(c, ty)?);
        }
        self.types[ty.index()].kind = TypeKind::Finite(ids);
        Ok(ty)
    }

    pub fn add_infinite_type(&mut self, name: &str, seed: &str) -> Result<TypeId, String> {
        let ty = self.push_type(name)?;
        let seed = self.push_constant(seed, ty)?;
        self.types[ty.index()].kind = TypeKind::Infinite { seed };
        Ok(ty)
    }

    pub fn add_function(&mut self, name: &str, args: Vec<TypeId>, ret: TypeId) -> Result<FuncId, String> {
        if self.func_id(name).is_some() {
            return Err(alloc::format!("function `{name}` declared twice"));
        }
        if !self.is_infinite(ret) {
            return Err(alloc::format!(
                "function `{name}` returns finite type `{}`; only infinite types have generators",
                self.ty(ret).name
            ));
        }
        self.functions.push(FuncDecl {
            name: name.into(),
            args,
            ret,
        });
        Ok(FuncId(self.functions.len() as u32 - 1))
    }

    pub fn add_predicate(&mut self, name: &str, args: Vec<TypeId>) -> Result<PredId, String> {
        if self.pred_id(name).is_some() {
            return Err(alloc::format!("predicate `{name}` declared twice"));
        }
        self.predicates.push(PredDecl {
            name: name.into(),
            args,
        });
        Ok(PredId(self.predicates.len() as u32 - 1))
    }

    fn push_type(&mut self, name: &str) -> Result<TypeId, String> {
        if self.type_id(name).is_some() {
            return Err(alloc::format!("type `{name}` declared twice"));
        }
        self.types.push(DomainType {
            name: name.into(),
            kind: TypeKind::Finite(Vec::new()),
        });
        Ok(TypeId(self.types.len() as u32 - 1))
    }

    fn push_constant(&mut self, name: &str, ty: TypeId) -> Result<ConstId, String> {
        if self.const_id(name).is_some() {
            return Err(alloc::format!("constant `{name}` declared twice"));
        }
        self.constants.push(ConstDecl { name: name.into(), ty });
        Ok(ConstId(self.constants.len() as u32 - 1))
    }
}
